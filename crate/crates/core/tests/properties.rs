mod common;

use common::*;
use heegaard::analysis::{analyze, Limits};
use heegaard::bigraph::IntersectionGraph;
use heegaard::diagram::HeegaardDiagram;
use heegaard::intmat::{SignedMatrix, SmithForm};
use heegaard::template::{template_diagram, template_matrix, Slope, TemplateError, TemplateParams};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use serde_json::Value;

fn matrix(max_g: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_g).prop_flat_map(move |g| prop::collection::vec(prop::collection::vec(-bound..=bound, g), g))
}

fn graph(max_g: usize, max_edges: usize) -> impl Strategy<Value = IntersectionGraph> {
    (1..=max_g)
        .prop_flat_map(move |g| {
            prop::collection::vec((0..g, 0..g, prop::bool::ANY), g..=max_edges.max(g)).prop_map(move |e| (g, e))
        })
        .prop_map(|(g, e)| {
            let edges: Vec<(usize, usize, i64)> = e.into_iter().map(|(a, b, s)| (a, b, if s { 1 } else { -1 })).collect();
            IntersectionGraph::new(g, &edges).unwrap()
        })
}

fn slope() -> impl Strategy<Value = Slope> {
    (-5i64..=5, 0i64..=5).prop_filter_map("0/0", |(p, q)| Slope::new(p, q).ok())
}

fn template() -> impl Strategy<Value = (TemplateParams, HeegaardDiagram)> {
    (slope(), slope(), slope(), slope()).prop_filter_map("degenerate template", |(a, b, c, d)| {
        let t = TemplateParams::new(a, b, c, d);
        match template_diagram(&t) {
            Ok(h) => Some((t, h)),
            Err(TemplateError::DegenerateTemplate(_)) => None,
            Err(e) => panic!("{e}"),
        }
    })
}

fn same_sign_template() -> impl Strategy<Value = (TemplateParams, HeegaardDiagram)> {
    (prop::bool::ANY, prop::collection::vec((1i64..=5, 1i64..=5), 4)).prop_map(|(neg, pq)| {
        let s: Vec<Slope> = pq.iter().map(|&(p, q)| Slope::new(if neg { -p } else { p }, q).unwrap()).collect();
        let t = TemplateParams::new(s[0], s[1], s[2], s[3]);
        let h = template_diagram(&t).unwrap();
        (t, h)
    })
}

/// Rotates every word of a diagram file by the given amounts.
fn rotate_words(text: &str, shifts: &[usize]) -> String {
    let mut v: Value = serde_json::from_str(text).unwrap();
    let mut k = 0;
    for key in ["alpha_words", "beta_words"] {
        for w in v[key].as_array_mut().unwrap() {
            let w = w.as_array_mut().unwrap();
            if !w.is_empty() {
                let n = shifts[k % shifts.len()] % w.len();
                w.rotate_left(n);
            }
            k += 1;
        }
    }
    serde_json::to_string(&v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn det_and_permanent_match_expansion(rows in matrix(5, 5)) {
        let m = SignedMatrix::from_rows(rows.clone()).unwrap();
        prop_assert_eq!(m.det(), BigInt::from(naive_det(&rows)));
        prop_assert_eq!(m.permanent().unwrap(), BigInt::from(naive_permanent(&rows)));
        prop_assert_eq!(m.transpose().det(), m.det());
    }

    #[test]
    fn polya_iff_det_reaches_permanent(rows in matrix(4, 3)) {
        let m = SignedMatrix::from_rows(rows.clone()).unwrap();
        let per = m.abs().permanent().unwrap();
        prop_assert!(m.det().abs() <= per);
        prop_assert_eq!(m.is_polya().unwrap(), m.det().abs() == per);
        prop_assert_eq!(m.is_polya().unwrap(), naive_polya(&rows));
    }

    #[test]
    fn smith_invariants_multiply_to_det(rows in matrix(4, 6)) {
        let m = SignedMatrix::from_rows(rows).unwrap();
        let inv = m.smith_invariants();
        let product: BigInt = inv.iter().product();
        prop_assert_eq!(product, m.det().abs());
        for w in inv.windows(2) {
            if !w[1].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
        let smith = SmithForm::new(&m);
        prop_assert_eq!(smith.order().map(|o| o.abs()), (!m.det().is_zero()).then(|| m.det().abs()));
    }

    #[test]
    fn matching_count_matches_enumeration(g in graph(5, 12)) {
        prop_assert_eq!(g.matching_count(), naive_matchings(&g));
        prop_assert_eq!(g.transpose().matching_count(), g.matching_count());
        let gens = g.enumerate_generators();
        prop_assert_eq!(gens.len() as u128, g.matching_count());
        if !gens.is_empty() {
            let signed: i128 = gens.iter().map(|x| x.sign as i128).sum();
            prop_assert_eq!(BigInt::from(signed).abs(), g.matrix().det().abs());
            prop_assert_eq!(g.is_strong().unwrap(), gens.iter().all(|x| x.sign == gens[0].sign));
        }
    }

    #[test]
    fn standard_form_keeps_the_count(g in graph(5, 12)) {
        prop_assume!(g.has_perfect_matching());
        let sf = g.standard_form().unwrap();
        let product: u128 = sf.components.iter().map(|c| c.matching_count()).product();
        prop_assert_eq!((1u128 << sf.rp3_count) * product, g.matching_count());
        for c in &sf.components {
            prop_assert!(c.genus() == 1 || c.min_degree() >= 3);
        }
    }

    #[test]
    fn one_extendible_graphs_meet_the_bound(g in graph(4, 12)) {
        prop_assume!(g.is_one_extendible() && g.min_degree() >= 3);
        prop_assert!(g.matching_count() as i64 >= g.matching_count_bound());
    }

    #[test]
    fn witnesses_split_multiplicatively(g in graph(5, 12)) {
        prop_assume!(g.has_perfect_matching());
        if let Some(t) = g.reducibility_witness().unwrap() {
            let (x, y) = g.split_at(&t).unwrap();
            prop_assert_eq!(x.matching_count() * y.matching_count(), g.matching_count());
            prop_assert_eq!(x.genus() + y.genus(), g.genus());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn template_matrix_matches_formula((t, h) in template()) {
        prop_assert_eq!(h.matrix(), template_matrix(&t));
        prop_assert!(h.euler_consistent());
        prop_assert_eq!(h.genus(), 2);
    }

    #[test]
    fn rotated_words_give_identical_reports((_, h) in template(), shifts in prop::collection::vec(0usize..17, 4)) {
        let text = h.to_json();
        let rotated = HeegaardDiagram::from_json(&rotate_words(&text, &shifts)).unwrap();
        let a = serde_json::to_string(&analyze(&h, Limits::default()).unwrap()).unwrap();
        let b = serde_json::to_string(&analyze(&rotated, Limits::default()).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn json_round_trip_is_stable((_, h) in template()) {
        let text = h.to_json();
        let back = HeegaardDiagram::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back.face_count(), h.face_count());
        prop_assert_eq!(back.region_count(), h.region_count());
    }

    #[test]
    fn same_sign_templates_have_no_waves((t, h) in same_sign_template()) {
        prop_assert!(t.same_sign());
        prop_assert!(h.detect_waves().0.is_empty());
    }

    #[test]
    fn lens_space_counts(p in 1u64..12, q in 1u64..12) {
        prop_assume!(q < p.max(2) && num_integer::gcd(p, q) == 1);
        let h = lens(p, q);
        prop_assert_eq!(h.generator_count(), p as u128);
        prop_assert_eq!(h.face_count(), p as usize);
        prop_assert!(h.euler_consistent());
        prop_assert!(h.matrix().det().abs() == BigInt::from(p) || (p == 1 && h.matrix().det().abs().is_one()));
    }
}
