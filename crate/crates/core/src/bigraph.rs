//! Signed bipartite multigraphs: the intersection graph of a diagram.
//!
//! Vertices `a_0..a_{g-1}` stand for α curves and `b_0..b_{g-1}` for β
//! curves; every intersection point is an edge with its local sign. Indices
//! are zero-based in the API and one-based in DOT output and reports.
//! Perfect matchings are the generators of the diagram.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intmat::SignedMatrix;

/// Largest genus for which [`IntersectionGraph::reducibility_witness`] scans subsets.
pub const WITNESS_SCAN_LIMIT: usize = 12;
/// Default edge limit for the brute-force Pfaffian orientation search.
pub const DEFAULT_EDGE_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph has no perfect matching (first Betti number is positive)")]
    NoGenerators,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("{what}: size {size} exceeds limit {limit}")]
    SizeLimitExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("edge ({a}, {b}) out of range for genus {g}")]
    InvalidEdge { a: usize, b: usize, g: usize },
    #[error("edge sign must be +1 or -1, got {0}")]
    InvalidSign(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Vertex {
    A(usize),
    B(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub sign: i8,
    pub id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionGraph {
    g: usize,
    edges: Vec<Edge>,
}

/// A perfect matching: `edges[i]` is the id of the edge used at `a_i`,
/// `permutation[i]` the matched `b` index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub edges: Vec<usize>,
    pub permutation: Vec<usize>,
    pub sign: i8,
}

/// Result of [`IntersectionGraph::standard_form`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardForm {
    /// Number of peeled genus-1 factors with two parallel edges.
    pub rp3_count: usize,
    /// Residual components: genus-1 graphs with at least three edges, or
    /// graphs of minimum degree at least three.
    pub components: Vec<IntersectionGraph>,
}

pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

impl IntersectionGraph {
    /// Builds a graph from `(a, b, sign)` triples; edge ids follow input order.
    pub fn new(g: usize, edges: &[(usize, usize, i64)]) -> Result<Self, GraphError> {
        let mut out = Vec::with_capacity(edges.len());
        for (id, &(a, b, sign)) in edges.iter().enumerate() {
            if a >= g || b >= g {
                return Err(GraphError::InvalidEdge { a, b, g });
            }
            if sign != 1 && sign != -1 {
                return Err(GraphError::InvalidSign(sign));
            }
            out.push(Edge {
                a,
                b,
                sign: sign as i8,
                id,
            });
        }
        Ok(IntersectionGraph { g, edges: out })
    }

    /// Coherent graph realising a matrix: `|m_ij|` parallel edges of sign `sgn m_ij`.
    pub fn from_matrix(m: &SignedMatrix) -> Self {
        let g = m.size();
        let mut edges = Vec::new();
        for a in 0..g {
            for b in 0..g {
                let v = m.get(a, b);
                for _ in 0..v.unsigned_abs() {
                    edges.push((a, b, v.signum()));
                }
            }
        }
        Self::new(g, &edges).expect("indices in range")
    }

    fn from_edges_renumbered(g: usize, edges: impl IntoIterator<Item = (usize, usize, i8)>) -> Self {
        let edges = edges
            .into_iter()
            .enumerate()
            .map(|(id, (a, b, sign))| Edge { a, b, sign, id })
            .collect();
        IntersectionGraph { g, edges }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.g)
            .flat_map(|i| [Vertex::A(i), Vertex::B(i)])
            .map(|v| self.degree(v))
            .min()
            .unwrap_or(0)
    }

    /// Distinct neighbours of a vertex, ascending.
    pub fn neighbors(&self, v: Vertex) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|e| match v {
                Vertex::A(i) if e.a == i => Some(e.b),
                Vertex::B(j) if e.b == j => Some(e.a),
                _ => None,
            })
            .collect()
    }

    /// The matrix of signed edge sums.
    pub fn matrix(&self) -> SignedMatrix {
        let mut m = SignedMatrix::zeros(self.g);
        for e in &self.edges {
            m.set(e.a, e.b, m.get(e.a, e.b) + e.sign as i64);
        }
        m
    }

    /// The matrix of edge counts.
    pub fn multiplicity(&self) -> SignedMatrix {
        let mut m = SignedMatrix::zeros(self.g);
        for e in &self.edges {
            m.set(e.a, e.b, m.get(e.a, e.b) + 1);
        }
        m
    }

    /// Number of perfect matchings, the permanent of the multiplicity matrix.
    pub fn matching_count(&self) -> u128 {
        let p = self
            .multiplicity()
            .permanent_i128()
            .expect("matching count fits in i128");
        p as u128
    }

    pub fn transpose(&self) -> IntersectionGraph {
        IntersectionGraph {
            g: self.g,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    a: e.b,
                    b: e.a,
                    ..*e
                })
                .collect(),
        }
    }

    /// All perfect matchings with their signs, ordered lexicographically by
    /// the edge ids used at `a_0, a_1, ...`.
    pub fn enumerate_generators(&self) -> Vec<Generator> {
        let g = self.g;
        let mut by_a: Vec<Vec<&Edge>> = vec![Vec::new(); g];
        for e in &self.edges {
            by_a[e.a].push(e);
        }
        let mut chosen: Vec<Option<&Edge>> = vec![None; g];
        let mut b_used = vec![false; g];
        let mut out = Vec::new();
        self.enumerate_rec(&by_a, &mut chosen, &mut b_used, 0, &mut out);
        out.sort_by(|x, y| x.edges.cmp(&y.edges));
        out
    }

    fn enumerate_rec<'a>(
        &self,
        by_a: &[Vec<&'a Edge>],
        chosen: &mut Vec<Option<&'a Edge>>,
        b_used: &mut Vec<bool>,
        depth: usize,
        out: &mut Vec<Generator>,
    ) {
        let g = self.g;
        if depth == g {
            let edges: Vec<usize> = chosen.iter().map(|e| e.unwrap().id).collect();
            let permutation: Vec<usize> = chosen.iter().map(|e| e.unwrap().b).collect();
            let product: i8 = chosen.iter().map(|e| e.unwrap().sign).product();
            let sign = permutation_sign(&permutation) * product;
            out.push(Generator {
                edges,
                permutation,
                sign,
            });
            return;
        }
        // pivot: unmatched a-vertex with the fewest available edges, lowest index on ties
        let mut pivot = None;
        let mut fewest = usize::MAX;
        for i in 0..g {
            if chosen[i].is_some() {
                continue;
            }
            let avail = by_a[i].iter().filter(|e| !b_used[e.b]).count();
            if avail < fewest {
                fewest = avail;
                pivot = Some(i);
            }
        }
        let Some(i) = pivot else { return };
        if fewest == 0 {
            return;
        }
        for &e in &by_a[i] {
            if b_used[e.b] {
                continue;
            }
            b_used[e.b] = true;
            chosen[i] = Some(e);
            self.enumerate_rec(by_a, chosen, b_used, depth + 1, out);
            chosen[i] = None;
            b_used[e.b] = false;
        }
    }

    /// True iff every generator carries the same sign, equivalently `|det| = #matchings`.
    pub fn is_strong(&self) -> Result<bool, GraphError> {
        let count = self.matching_count();
        if count == 0 {
            return Err(GraphError::NoGenerators);
        }
        Ok(self.matrix().det().abs() == BigInt::from(count))
    }

    /// True iff all edges between each pair share one sign.
    pub fn is_coherent(&self) -> bool {
        let mut seen = vec![0i8; self.g * self.g];
        for e in &self.edges {
            let slot = &mut seen[e.a * self.g + e.b];
            if *slot == 0 {
                *slot = e.sign;
            } else if *slot != e.sign {
                return false;
            }
        }
        true
    }

    /// Perfect matching existence on the graph minus the given vertices (Kuhn's algorithm).
    pub fn has_perfect_matching_avoiding(&self, skip_a: Option<usize>, skip_b: Option<usize>) -> bool {
        let g = self.g;
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g];
        for e in &self.edges {
            if Some(e.a) == skip_a || Some(e.b) == skip_b {
                continue;
            }
            if !adj[e.a].contains(&e.b) {
                adj[e.a].push(e.b);
            }
        }
        let mut match_b: Vec<Option<usize>> = vec![None; g];
        fn augment(
            a: usize,
            adj: &[Vec<usize>],
            visited: &mut [bool],
            match_b: &mut [Option<usize>],
        ) -> bool {
            for &b in &adj[a] {
                if visited[b] {
                    continue;
                }
                visited[b] = true;
                if match_b[b].is_none() || augment(match_b[b].unwrap(), adj, visited, match_b) {
                    match_b[b] = Some(a);
                    return true;
                }
            }
            false
        }
        for a in 0..g {
            if Some(a) == skip_a {
                continue;
            }
            let mut visited = vec![false; g];
            if let Some(sb) = skip_b {
                visited[sb] = true;
            }
            if !augment(a, &adj, &mut visited, &mut match_b) {
                return false;
            }
        }
        true
    }

    pub fn has_perfect_matching(&self) -> bool {
        self.has_perfect_matching_avoiding(None, None)
    }

    /// True iff every edge lies in some perfect matching.
    pub fn is_one_extendible(&self) -> bool {
        if !self.has_perfect_matching() {
            return false;
        }
        let mut checked = BTreeSet::new();
        self.edges.iter().all(|e| {
            !checked.insert((e.a, e.b)) || self.has_perfect_matching_avoiding(Some(e.a), Some(e.b))
        })
    }

    /// Smallest (then lexicographically least) proper nonempty `T ⊂ A` with
    /// exactly `|T|` neighbours. Exhaustive over subsets, so limited to
    /// genus [`WITNESS_SCAN_LIMIT`].
    pub fn reducibility_witness(&self) -> Result<Option<Vec<usize>>, GraphError> {
        if !self.has_perfect_matching() {
            return Err(GraphError::NoGenerators);
        }
        let g = self.g;
        if g > WITNESS_SCAN_LIMIT {
            return Err(GraphError::SizeLimitExceeded {
                what: "reducibility witness scan",
                size: g,
                limit: WITNESS_SCAN_LIMIT,
            });
        }
        let mut nbr = vec![0u32; g];
        for e in &self.edges {
            nbr[e.a] |= 1 << e.b;
        }
        for k in 1..g {
            let mut combo: Vec<usize> = (0..k).collect();
            loop {
                let mask = combo.iter().fold(0u32, |m, &i| m | nbr[i]);
                if mask.count_ones() as usize == k {
                    return Ok(Some(combo));
                }
                // next combination in lexicographic order
                let Some(pos) = (0..k).rev().find(|&p| combo[p] < g - k + p) else {
                    break;
                };
                combo[pos] += 1;
                for p in pos + 1..k {
                    combo[p] = combo[p - 1] + 1;
                }
            }
        }
        Ok(None)
    }

    /// Induced subgraph on the given a- and b-vertices, relabelled in ascending order.
    pub fn induced(&self, a_set: &[usize], b_set: &[usize]) -> IntersectionGraph {
        assert_eq!(a_set.len(), b_set.len(), "blocks must have equal size");
        let pos = |set: &[usize], x: usize| set.iter().position(|&y| y == x);
        let edges = self.edges.iter().filter_map(|e| {
            Some((pos(a_set, e.a)?, pos(b_set, e.b)?, e.sign))
        });
        Self::from_edges_renumbered(a_set.len(), edges.collect::<Vec<_>>())
    }

    /// Splits along a witness `T ⊂ A`: returns the graph on `T ∪ N(T)` and
    /// the graph on the complements. Edges from `A \ T` to `N(T)` lie in no
    /// perfect matching and are dropped.
    pub fn split_at(&self, t: &[usize]) -> Result<(IntersectionGraph, IntersectionGraph), GraphError> {
        let mut nt = BTreeSet::new();
        for e in &self.edges {
            if t.contains(&e.a) {
                nt.insert(e.b);
            }
        }
        if nt.len() != t.len() {
            return Err(GraphError::PreconditionViolated(format!(
                "subset {t:?} has {} neighbours",
                nt.len()
            )));
        }
        let mut ts: Vec<usize> = t.to_vec();
        ts.sort_unstable();
        let nts: Vec<usize> = nt.iter().copied().collect();
        let rest_a: Vec<usize> = (0..self.g).filter(|i| !ts.contains(i)).collect();
        let rest_b: Vec<usize> = (0..self.g).filter(|j| !nt.contains(j)).collect();
        Ok((self.induced(&ts, &nts), self.induced(&rest_a, &rest_b)))
    }

    /// Removes the forced pair `(a, b)` together with every incident edge.
    pub fn remove_pair(&self, a: usize, b: usize) -> IntersectionGraph {
        let rest_a: Vec<usize> = (0..self.g).filter(|&i| i != a).collect();
        let rest_b: Vec<usize> = (0..self.g).filter(|&j| j != b).collect();
        self.induced(&rest_a, &rest_b)
    }

    /// The handleslide rewrite: `v` has `m >= 1` edges to `w` and at most one
    /// other edge `q = (v, w')`. The `v`–`w` edges are removed and, for each
    /// edge `e = (u, w')` with `u != v`, `m` parallel edges `(u, w)` are added.
    /// The new edge paired with the `k`-th removed edge gets sign
    /// `-sign(k) * sign(e) * sign(q)`, which preserves every generator's sign
    /// under the matching bijection. Removed edges keep no ids; survivors are
    /// renumbered in order and new edges appended.
    pub fn degree_two_slide(&self, v: Vertex, w: Vertex) -> Result<IntersectionGraph, GraphError> {
        match (v, w) {
            (Vertex::A(i), Vertex::B(j)) => self.slide_from_a(i, j),
            (Vertex::B(j), Vertex::A(i)) => Ok(self.transpose().slide_from_a(j, i)?.transpose()),
            _ => Err(GraphError::PreconditionViolated(
                "vertices must lie in opposite parts".into(),
            )),
        }
    }

    fn slide_from_a(&self, v: usize, w: usize) -> Result<IntersectionGraph, GraphError> {
        if v >= self.g || w >= self.g {
            return Err(GraphError::PreconditionViolated("vertex out of range".into()));
        }
        let block: Vec<&Edge> = self.edges.iter().filter(|e| e.a == v && e.b == w).collect();
        let others: Vec<&Edge> = self.edges.iter().filter(|e| e.a == v && e.b != w).collect();
        if block.is_empty() {
            return Err(GraphError::PreconditionViolated(format!(
                "a{} has no edge to b{}",
                v + 1,
                w + 1
            )));
        }
        if others.len() > 1 {
            return Err(GraphError::PreconditionViolated(format!(
                "a{} has {} edges outside b{}",
                v + 1,
                others.len(),
                w + 1
            )));
        }
        if block.iter().any(|e| e.sign != block[0].sign) {
            return Err(GraphError::PreconditionViolated(format!(
                "edges a{}–b{} are not coherent",
                v + 1,
                w + 1
            )));
        }
        let Some(q) = others.first() else {
            return Ok(self.clone());
        };
        let w_other = q.b;
        let mut edges: Vec<(usize, usize, i8)> = self
            .edges
            .iter()
            .filter(|e| !(e.a == v && e.b == w))
            .map(|e| (e.a, e.b, e.sign))
            .collect();
        for e in self.edges.iter().filter(|e| e.b == w_other && e.a != v) {
            for k in &block {
                edges.push((e.a, w, -k.sign * e.sign * q.sign));
            }
        }
        Ok(Self::from_edges_renumbered(self.g, edges))
    }

    /// Repeatedly splits at witnesses, destabilises forced pairs, peels
    /// two-edge genus-1 factors and applies [`Self::degree_two_slide`] at
    /// vertices of degree at most two, until every residual component has
    /// minimum degree at least three (genus-1 components are left as is).
    /// Invariant: `2^n * prod(component matchings) = matchings(self)`.
    pub fn standard_form(&self) -> Result<StandardForm, GraphError> {
        if !self.has_perfect_matching() {
            return Err(GraphError::NoGenerators);
        }
        let mut rp3_count = 0;
        let mut components = Vec::new();
        let mut work = vec![self.clone()];
        while let Some(graph) = work.pop() {
            match graph.g {
                0 => continue,
                1 => {
                    match graph.edges.len() {
                        1 => {}
                        2 => rp3_count += 1,
                        _ => components.push(graph),
                    }
                    continue;
                }
                _ => {}
            }
            if let Some(v) = graph.first_vertex_with_degree(|d| d == 1) {
                let e = graph.edges.iter().find(|e| e.touches(v)).unwrap();
                work.push(graph.remove_pair(e.a, e.b));
                continue;
            }
            if let Some(t) = graph.reducibility_witness()? {
                let (left, right) = graph.split_at(&t)?;
                work.push(right);
                work.push(left);
                continue;
            }
            if let Some(v) = graph.first_vertex_with_degree(|d| d <= 2) {
                let e = graph.edges.iter().find(|e| e.touches(v)).unwrap();
                let w = match v {
                    Vertex::A(_) => Vertex::B(e.b),
                    Vertex::B(_) => Vertex::A(e.a),
                };
                work.push(graph.degree_two_slide(v, w)?);
                continue;
            }
            components.push(graph);
        }
        Ok(StandardForm {
            rp3_count,
            components,
        })
    }

    fn first_vertex_with_degree(&self, pred: impl Fn(usize) -> bool) -> Option<Vertex> {
        (0..self.g)
            .map(Vertex::A)
            .chain((0..self.g).map(Vertex::B))
            .find(|&v| pred(self.degree(v)))
    }

    /// `m - n + 2` with `m` edges and `n = 2g` vertices; a lower bound on the
    /// matching count of a 1-extendible graph.
    pub fn matching_count_bound(&self) -> i64 {
        self.edges.len() as i64 - 2 * self.g as i64 + 2
    }

    pub fn pfaffian_orientation_exists(&self) -> Result<bool, GraphError> {
        self.pfaffian_orientation_exists_with_limit(DEFAULT_EDGE_LIMIT)
    }

    /// Brute force over sign assignments: does some `±1` reweighting make
    /// `|det|` equal the matching count? Negating every edge only changes
    /// the determinant's sign, so the first edge is fixed.
    pub fn pfaffian_orientation_exists_with_limit(&self, limit: usize) -> Result<bool, GraphError> {
        let m = self.edges.len();
        if m > limit {
            return Err(GraphError::SizeLimitExceeded {
                what: "pfaffian orientation search (edges)",
                size: m,
                limit,
            });
        }
        let count = self.matching_count() as i128;
        if count == 0 || m == 0 {
            return Ok(true);
        }
        use rayon::prelude::*;
        let g = self.g;
        let found = (0u64..(1u64 << (m - 1))).into_par_iter().any(|mask| {
            let mut mat = SignedMatrix::zeros(g);
            for (k, e) in self.edges.iter().enumerate() {
                let s = if k > 0 && mask >> (k - 1) & 1 == 1 { -1 } else { 1 };
                mat.set(e.a, e.b, mat.get(e.a, e.b) + s);
            }
            mat.det_i128().map(|d| d.abs() == count).unwrap_or(false)
        });
        Ok(found)
    }

    /// Graphviz rendering; edge labels carry the sign.
    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        writeln!(s, "graph intersection {{").unwrap();
        writeln!(s, "  rankdir=LR;").unwrap();
        writeln!(s, "  subgraph cluster_alpha {{ label=\"alpha\"; color=red;").unwrap();
        for i in 0..self.g {
            writeln!(s, "    a{} [shape=circle];", i + 1).unwrap();
        }
        writeln!(s, "  }}").unwrap();
        writeln!(s, "  subgraph cluster_beta {{ label=\"beta\"; color=blue;").unwrap();
        for j in 0..self.g {
            writeln!(s, "    b{} [shape=circle];", j + 1).unwrap();
        }
        writeln!(s, "  }}").unwrap();
        for e in &self.edges {
            let label = if e.sign > 0 { "+" } else { "-" };
            writeln!(
                s,
                "  a{} -- b{} [label=\"{}\", id=\"e{}\"];",
                e.a + 1,
                e.b + 1,
                label,
                e.id
            )
            .unwrap();
        }
        writeln!(s, "}}").unwrap();
        s
    }
}

impl Edge {
    fn touches(&self, v: Vertex) -> bool {
        match v {
            Vertex::A(i) => self.a == i,
            Vertex::B(j) => self.b == j,
        }
    }
}

/// `h(1) = 2`, `h(g) = ceil(4 h(g-1) / 3)`.
pub fn voorhoeve_h(g: u32) -> u64 {
    assert!(g >= 1, "genus must be positive");
    (2..=g).fold(2u64, |h, _| (4 * h).div_ceil(3))
}

/// `f(g) = ceil(3 h(g) / 2)`: the minimum matching count of a cubic
/// bipartite graph on `2g` vertices.
pub fn voorhoeve_bound(g: u32) -> u64 {
    (3 * voorhoeve_h(g)).div_ceil(2)
}
