//! The full report printed by `heegaard analyze`.

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bigraph::{GraphError, DEFAULT_EDGE_LIMIT};
use crate::diagram::{HeegaardDiagram, WaveRecord};
use crate::intmat::DEFAULT_PERMANENT_LIMIT;

/// Size limits for the exponential parts of an analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest genus whose permanent is computed.
    pub permanent: usize,
    /// Largest edge count for generator enumeration and the Pfaffian search.
    pub edges: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            permanent: DEFAULT_PERMANENT_LIMIT,
            edges: DEFAULT_EDGE_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimitExceeded { what: &'static str, size: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorSigns {
    pub positive: u64,
    pub negative: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardFormSummary {
    pub rp3_count: usize,
    pub component_genera: Vec<usize>,
    pub component_generator_counts: Vec<u128>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub genus: usize,
    pub point_count: usize,
    pub matrix: Vec<Vec<i64>>,
    #[serde(serialize_with = "bigint")]
    pub det: BigInt,
    pub generator_count: u128,
    /// `|det|` equals the generator count, which is positive.
    pub strong: bool,
    pub coherent: bool,
    pub one_extendible: bool,
    /// One-based α indices of a splitting set, if the graph is reducible.
    pub reducible_witness: Option<Vec<usize>>,
    /// Nontrivial invariant factors of first homology; 0 stands for Z.
    #[serde(serialize_with = "bigints")]
    pub homology_invariants: Vec<BigInt>,
    pub face_count: usize,
    pub region_count: usize,
    pub euler_consistent: bool,
    pub waves: Vec<WaveRecord>,
    pub antiwaves: Vec<WaveRecord>,
    pub standard_form_summary: Option<StandardFormSummary>,
    /// Absent when the edge count exceeds [`Limits::edges`].
    pub generator_signs: Option<GeneratorSigns>,
    pub pfaffian_orientation: Option<bool>,
}

fn bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(x) => s.serialize_i64(x),
        Err(_) => s.collect_str(v),
    }
}

fn bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| i64::try_from(x).map_err(|_| x.to_string())).map(|r| match r {
        Ok(n) => serde_json::Value::from(n),
        Err(t) => serde_json::Value::from(t),
    }))
}

fn limit(err: GraphError) -> AnalysisError {
    match err {
        GraphError::SizeLimitExceeded { what, size, limit } => AnalysisError::SizeLimitExceeded { what, size, limit },
        other => unreachable!("analysis only calls fallible graph operations for their size limits: {other}"),
    }
}

pub fn analyze(h: &HeegaardDiagram, limits: Limits) -> Result<AnalysisReport, AnalysisError> {
    let g = h.genus();
    if g > limits.permanent {
        return Err(AnalysisError::SizeLimitExceeded {
            what: "permanent",
            size: g,
            limit: limits.permanent,
        });
    }
    let graph = h.intersection_graph();
    let m = graph.matrix();
    let det = m.det();
    let count = graph.matching_count();
    let reducible_witness = graph
        .reducibility_witness()
        .map_err(limit)?
        .map(|w| w.into_iter().map(|i| i + 1).collect());
    let standard_form_summary = match graph.standard_form() {
        Ok(sf) => Some(StandardFormSummary {
            rp3_count: sf.rp3_count,
            component_genera: sf.components.iter().map(|c| c.genus()).collect(),
            component_generator_counts: sf.components.iter().map(|c| c.matching_count()).collect(),
        }),
        Err(GraphError::NoGenerators) => None,
        Err(e) => return Err(limit(e)),
    };
    let small = graph.edge_count() <= limits.edges;
    let generator_signs = small.then(|| {
        let gens = graph.enumerate_generators();
        let positive = gens.iter().filter(|x| x.sign > 0).count() as u64;
        GeneratorSigns {
            positive,
            negative: gens.len() as u64 - positive,
        }
    });
    let pfaffian_orientation = if small {
        Some(graph.pfaffian_orientation_exists_with_limit(limits.edges).map_err(limit)?)
    } else {
        None
    };
    let (waves, antiwaves) = h.detect_waves();
    Ok(AnalysisReport {
        genus: g,
        point_count: h.point_count(),
        matrix: m.rows(),
        strong: count > 0 && det.abs() == BigInt::from(count),
        det,
        generator_count: count,
        coherent: graph.is_coherent(),
        one_extendible: graph.is_one_extendible(),
        reducible_witness,
        homology_invariants: m.smith_invariants().into_iter().filter(|x| !x.is_one()).collect(),
        face_count: h.face_count(),
        region_count: h.region_count(),
        euler_consistent: h.euler_consistent(),
        waves,
        antiwaves,
        standard_form_summary,
        generator_signs,
        pfaffian_orientation,
    })
}

impl AnalysisReport {
    /// Plain `key: value` lines for terminal output.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| out.push_str(&format!("{k:<22}{v}\n"));
        line("genus", self.genus.to_string());
        line("points", self.point_count.to_string());
        line("matrix", format!("{:?}", self.matrix));
        line("det", self.det.to_string());
        line("generators", self.generator_count.to_string());
        line("strong", self.strong.to_string());
        line("coherent", self.coherent.to_string());
        line("1-extendible", self.one_extendible.to_string());
        line(
            "reducible",
            match &self.reducible_witness {
                Some(w) => format!("yes, split at alpha {w:?}"),
                None => "no".into(),
            },
        );
        let hom: Vec<String> = self
            .homology_invariants
            .iter()
            .map(|x| if x.sign() == num_bigint::Sign::NoSign { "Z".into() } else { format!("Z/{x}") })
            .collect();
        line("homology", if hom.is_empty() { "0".into() } else { hom.join(" + ") });
        line("faces", format!("{} ({} regions)", self.face_count, self.region_count));
        line("euler consistent", self.euler_consistent.to_string());
        line("waves", self.waves.len().to_string());
        line("anti-waves", self.antiwaves.len().to_string());
        if let Some(sf) = &self.standard_form_summary {
            line(
                "standard form",
                format!("{} RP3 factors, components {:?} of genus {:?}", sf.rp3_count, sf.component_generator_counts, sf.component_genera),
            );
        }
        if let Some(s) = &self.generator_signs {
            line("generator signs", format!("{} positive, {} negative", s.positive, s.negative));
        }
        if let Some(p) = self.pfaffian_orientation {
            line("pfaffian orientation", p.to_string());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::{lens, s1xs2_diagram};

    #[test]
    fn lens_space_report() {
        let r = analyze(&lens(5, 2), Limits::default()).unwrap();
        assert_eq!(r.genus, 1);
        assert_eq!(r.generator_count, 5);
        assert!(r.strong);
        assert_eq!(r.homology_invariants, vec![BigInt::from(5)]);
        assert_eq!(r.generator_signs, Some(GeneratorSigns { positive: 5, negative: 0 }));
        assert!(r.euler_consistent);
        assert!(r.to_table().contains("Z/5"));
    }

    #[test]
    fn infinite_homology() {
        let r = analyze(&s1xs2_diagram(), Limits::default()).unwrap();
        assert_eq!(r.det, BigInt::from(0));
        assert!(!r.strong);
        assert!(r.homology_invariants.iter().any(|x| x.sign() == num_bigint::Sign::NoSign));
        assert!(r.to_table().contains("homology              Z"));
    }

    #[test]
    fn limits_are_enforced() {
        let tight = Limits { permanent: 0, edges: 24 };
        assert!(analyze(&lens(3, 1), tight).is_err());
        let r = analyze(&lens(7, 2), Limits { permanent: 20, edges: 3 }).unwrap();
        assert_eq!(r.generator_signs, None);
        assert_eq!(r.pfaffian_orientation, None);
    }
}
