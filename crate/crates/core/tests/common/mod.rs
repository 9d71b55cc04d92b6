//! Fixtures and naive oracles shared by the integration suites.
#![allow(dead_code)]

use heegaard::bigraph::IntersectionGraph;
use heegaard::diagram::{HeegaardDiagram, Point};
use heegaard::template::{Slope, TemplateError, TemplateParams};
use rand::Rng;

pub fn pt(id: u64, alpha: usize, beta: usize, sign: i8) -> Point {
    Point { id, alpha, beta, sign }
}

/// Genus-1 diagram of L(p, q): `p` positive points, β visiting every `q`-th.
pub fn lens(p: u64, q: u64) -> HeegaardDiagram {
    let points = (1..=p).map(|i| pt(i, 0, 0, 1)).collect();
    let alpha = vec![(1..=p).collect()];
    let beta = vec![(0..p).map(|k| (k * q) % p + 1).collect()];
    HeegaardDiagram::new(1, points, alpha, beta, Vec::new()).unwrap()
}

/// Genus-1 diagram whose α meets β in points of signs (+, +, -).
pub fn wave_diagram() -> HeegaardDiagram {
    let points = vec![pt(1, 0, 0, 1), pt(2, 0, 0, 1), pt(3, 0, 0, -1)];
    [[1, 2, 3], [1, 3, 2]]
        .into_iter()
        .find_map(|b| HeegaardDiagram::new(1, points.clone(), vec![vec![1, 2, 3]], vec![b.to_vec()], Vec::new()).ok())
        .expect("one β order is cellular")
}

/// A slope `p/q` with `|p| <= bound`, `0 <= q <= bound`, not `0/0`.
pub fn random_slope(rng: &mut impl Rng, bound: i64) -> Slope {
    loop {
        let (p, q) = (rng.gen_range(-bound..=bound), rng.gen_range(0..=bound));
        if let Ok(s) = Slope::new(p, q) {
            return s;
        }
    }
}

pub fn random_params(rng: &mut impl Rng, bound: i64) -> TemplateParams {
    TemplateParams::new(
        random_slope(rng, bound),
        random_slope(rng, bound),
        random_slope(rng, bound),
        random_slope(rng, bound),
    )
}

/// Same-sign parameters with every slope strictly positive or strictly negative.
pub fn random_same_sign_params(rng: &mut impl Rng, bound: i64) -> TemplateParams {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut s = || Slope::new(sign * rng.gen_range(1..=bound), rng.gen_range(1..=bound)).unwrap();
    TemplateParams::new(s(), s(), s(), s())
}

/// Draws template diagrams until one is non-degenerate.
pub fn random_template<R: Rng>(rng: &mut R, draw: impl Fn(&mut R) -> TemplateParams) -> (TemplateParams, HeegaardDiagram) {
    loop {
        let t = draw(rng);
        match heegaard::template::template_diagram(&t) {
            Ok(h) => return (t, h),
            Err(TemplateError::DegenerateTemplate(_)) => continue,
            Err(e) => panic!("{:?}: {e}", t.a),
        }
    }
}

/// Random graph on `g + g` vertices with `edges` edges of random sign.
pub fn random_graph(rng: &mut impl Rng, g: usize, edges: usize) -> IntersectionGraph {
    let list: Vec<(usize, usize, i64)> = (0..edges)
        .map(|_| (rng.gen_range(0..g), rng.gen_range(0..g), if rng.gen_bool(0.5) { 1 } else { -1 }))
        .collect();
    IntersectionGraph::new(g, &list).unwrap()
}

/// All permutations of `0..n` with their signs, from inversion counts.
pub fn naive_permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(a.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, a, out);
            if k.is_multiple_of(2) {
                a.swap(i, k - 1);
            } else {
                a.swap(0, k - 1);
            }
        }
    }
    let mut out = Vec::new();
    heap(n, &mut (0..n).collect(), &mut out);
    out.into_iter()
        .map(|p| {
            let inversions = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let s = if inversions % 2 == 0 { 1 } else { -1 };
            (p, s)
        })
        .collect()
}

/// Leibniz expansion.
pub fn naive_det(m: &[Vec<i64>]) -> i128 {
    naive_permutations(m.len())
        .iter()
        .map(|(p, s)| *s as i128 * p.iter().enumerate().map(|(i, &j)| m[i][j] as i128).product::<i128>())
        .sum()
}

pub fn naive_permanent(m: &[Vec<i64>]) -> i128 {
    naive_permutations(m.len())
        .iter()
        .map(|(p, _)| p.iter().enumerate().map(|(i, &j)| m[i][j] as i128).product::<i128>())
        .sum()
}

/// Pólya by expansion: nonzero terms never take both signs.
pub fn naive_polya(m: &[Vec<i64>]) -> bool {
    let terms: Vec<i128> = naive_permutations(m.len())
        .iter()
        .map(|(p, s)| *s as i128 * p.iter().enumerate().map(|(i, &j)| m[i][j].signum() as i128).product::<i128>())
        .collect();
    !(terms.contains(&1) && terms.contains(&-1))
}

/// Counts edge sets that pick one edge per α and per β vertex.
pub fn naive_matchings(g: &IntersectionGraph) -> u128 {
    fn rec(edges: &[(usize, usize)], a: usize, n: usize, used_b: &mut Vec<bool>) -> u128 {
        if a == n {
            return 1;
        }
        let mut total = 0;
        for &(x, y) in edges {
            if x == a && !used_b[y] {
                used_b[y] = true;
                total += rec(edges, a + 1, n, used_b);
                used_b[y] = false;
            }
        }
        total
    }
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.a, e.b)).collect();
    rec(&edges, 0, g.genus(), &mut vec![false; g.genus()])
}
