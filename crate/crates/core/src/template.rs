//! The genus-2 diagrams `H(a1, a2, a3, a4)` built from two plumbed annuli.
//!
//! The surface is modelled with exact integer coordinates: annuli `A` and
//! `A'` (x periodic in `[0, 4000)`, y in `[0, 1000]`) and two square
//! handles `Q_X`, `Q_Y` with local coordinates `(u, w)` in `[0, 1000]^2`.
//! `Q_X` is handle 1 of `N = A + handles` and handle 2 of `N'`; `Q_Y` the
//! reverse. A curve in an annulus is the oriented resolution of `h`
//! horizontal circles and `v` vertical strands, closed up by `|v|` cores
//! through its handle. Crossings are read off from the coordinates, and
//! each curve's word is the order in which it meets them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{CurveKind, DiagramError, FaceRef, HeegaardDiagram, Point, Side, UnionFind};
use crate::intmat::SignedMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("cannot parse slope {0:?}")]
    SlopeParse(String),
    #[error("degenerate template: {0}")]
    DegenerateTemplate(String),
    #[error("template diagram failed validation: {0}")]
    Diagram(#[from] DiagramError),
}

/// A reduced slope `p/q` with `q >= 0`; `1/0` is the only slope with `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

impl Slope {
    pub fn new(p: i64, q: i64) -> Result<Self, TemplateError> {
        let bad = || TemplateError::SlopeParse(format!("{p}/{q}"));
        if p == 0 && q == 0 {
            return Err(bad());
        }
        let (mut p, mut q) = if q < 0 {
            (p.checked_neg().ok_or_else(bad)?, q.checked_neg().ok_or_else(bad)?)
        } else {
            (p, q)
        };
        let d = p.gcd(&q);
        p /= d;
        q /= d;
        if q == 0 {
            p = 1;
        }
        Ok(Slope { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `Some(±1)` for a signed slope; `None` for `0/1` and `1/0`, which count as both signs.
    pub fn sign(&self) -> Option<i64> {
        if self.p == 0 || self.q == 0 {
            None
        } else {
            Some(self.p.signum())
        }
    }
}

impl FromStr for Slope {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TemplateError::SlopeParse(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
            None => (t.parse().map_err(|_| bad())?, 1),
        };
        Slope::new(p, q).map_err(|_| bad())
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TemplateParams {
    pub a: [Slope; 4],
}

impl TemplateParams {
    pub fn new(a1: Slope, a2: Slope, a3: Slope, a4: Slope) -> Self {
        TemplateParams { a: [a1, a2, a3, a4] }
    }

    pub fn parse(slopes: &[&str]) -> Result<Self, TemplateError> {
        if slopes.len() != 4 {
            return Err(TemplateError::SlopeParse(format!("expected four slopes, got {}", slopes.len())));
        }
        let mut a = [Slope { p: 1, q: 0 }; 4];
        for (slot, s) in a.iter_mut().zip(slopes) {
            *slot = s.parse()?;
        }
        Ok(TemplateParams { a })
    }

    /// All four slopes share a sign, with `0/1` and `1/0` counting as either.
    pub fn same_sign(&self) -> bool {
        let signs: Vec<i64> = self.a.iter().filter_map(Slope::sign).collect();
        signs.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn template_matrix(t: &TemplateParams) -> SignedMatrix {
    let [(p1, q1), (p2, q2), (p3, q3), (p4, q4)] = t.a.map(|s| (s.p, s.q));
    SignedMatrix::from_rows(vec![
        vec![-p1 * q2 - q1 * p2, -q1 * p4],
        vec![-q2 * p3, p3 * q4 + q3 * p4],
    ])
    .expect("square")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AnnulusPairing {
    pub algebraic: i64,
    pub geometric: i64,
    pub minimal_position: bool,
}

/// Algebraic and geometric intersection of `γ(p1,q1)` and `γ(p2,q2)` in the annulus.
pub fn annulus_pairing(p1: i64, q1: i64, p2: i64, q2: i64) -> AnnulusPairing {
    let (x, y) = (p1 * q2, q1 * p2);
    AnnulusPairing {
        algebraic: x - y,
        geometric: x.abs() + y.abs(),
        minimal_position: !((x > 0 && y > 0) || (x < 0 && y < 0)),
    }
}

const WIDTH: i64 = 4000;
const HEIGHT: i64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Piece {
    A,
    APrime,
    QX,
    QY,
}

impl Piece {
    fn periodic(self) -> bool {
        matches!(self, Piece::A | Piece::APrime)
    }

    fn orientation(self) -> i64 {
        match self {
            Piece::APrime => -1,
            _ => 1,
        }
    }
}

/// Axis-parallel segment: `fixed` is y for a horizontal segment and x for a
/// vertical one; it runs from `start` for `len` units in direction `dir`.
#[derive(Debug, Clone, Copy)]
struct Seg {
    piece: Piece,
    horizontal: bool,
    fixed: i64,
    start: i64,
    dir: i64,
    len: i64,
}

impl Seg {
    fn reversed(self) -> Seg {
        Seg {
            start: self.start + self.dir * self.len,
            dir: -self.dir,
            ..self
        }
    }

    /// Distance along `self` to where it meets the coordinate `c`, if strictly inside.
    fn offset_to(&self, c: i64) -> Option<i64> {
        let raw = (c - self.start) * self.dir;
        let t = if self.piece.periodic() && self.horizontal {
            raw.rem_euclid(WIDTH)
        } else {
            raw
        };
        (t > 0 && t < self.len).then_some(t)
    }

    fn tangent(&self) -> (i64, i64) {
        if self.horizontal {
            (self.dir, 0)
        } else {
            (0, self.dir)
        }
    }
}

/// How a handle's own coordinates `(u', w')` sit in the `N` frame `(u, w)`.
#[derive(Clone, Copy)]
enum HandleMap {
    Direct,
    /// `(u', w') = (w, u)`
    Swap,
    /// `(u', w') = (L - w, L - u)`
    AntiSwap,
}

/// Which cluster and which handle a curve uses.
struct Placement {
    piece: Piece,
    handle: Piece,
    map: HandleMap,
    strand_base: i64,
    level_base: i64,
}

fn curve_path(h: i64, v: i64, pl: &Placement) -> Vec<Seg> {
    if v < 0 {
        let mut segs: Vec<Seg> = curve_path(-h, -v, pl).into_iter().map(Seg::reversed).collect();
        segs.reverse();
        return segs;
    }
    if v == 0 {
        return vec![Seg {
            piece: pl.piece,
            horizontal: true,
            fixed: pl.level_base,
            start: 0,
            dir: h.signum(),
            len: WIDTH,
        }];
    }
    let strand = |k: i64| pl.strand_base + 1 + k;
    let step = h.signum();
    let mut segs = Vec::new();
    let mut k = 0i64;
    for _ in 0..v {
        let mut y = 0;
        for j in 0..h.abs() {
            let level = pl.level_base + j;
            segs.push(Seg {
                piece: pl.piece,
                horizontal: false,
                fixed: strand(k),
                start: y,
                dir: 1,
                len: level - y,
            });
            let next = (k + step).rem_euclid(v);
            let mut len = ((strand(next) - strand(k)) * step).rem_euclid(WIDTH);
            if len == 0 {
                len = WIDTH;
            }
            segs.push(Seg {
                piece: pl.piece,
                horizontal: true,
                fixed: level,
                start: strand(k),
                dir: step,
                len,
            });
            y = level;
            k = next;
        }
        segs.push(Seg {
            piece: pl.piece,
            horizontal: false,
            fixed: strand(k),
            start: y,
            dir: 1,
            len: HEIGHT - y,
        });
        // the core runs along w' at u' = 1 + k
        let (horizontal, fixed, start, dir) = match pl.map {
            HandleMap::Direct => (false, 1 + k, 0, 1),
            HandleMap::Swap => (true, 1 + k, 0, 1),
            HandleMap::AntiSwap => (true, HEIGHT - 1 - k, HEIGHT, -1),
        };
        segs.push(Seg {
            piece: pl.handle,
            horizontal,
            fixed,
            start,
            dir,
            len: HEIGHT,
        });
    }
    debug_assert_eq!(k, 0, "a single closed curve needs gcd(h, v) = 1");
    segs
}

struct Crossing {
    alpha: usize,
    beta: usize,
    sign: i8,
    alpha_pos: (usize, i64),
    beta_pos: (usize, i64),
}

fn crossings(alphas: &[Vec<Seg>], betas: &[Vec<Seg>]) -> Vec<Crossing> {
    let mut out = Vec::new();
    for (ai, a_path) in alphas.iter().enumerate() {
        for (bi, b_path) in betas.iter().enumerate() {
            for (sa, a) in a_path.iter().enumerate() {
                for (sb, b) in b_path.iter().enumerate() {
                    if a.piece != b.piece || a.horizontal == b.horizontal {
                        continue;
                    }
                    let (Some(ta), Some(tb)) = (a.offset_to(b.fixed), b.offset_to(a.fixed)) else {
                        continue;
                    };
                    let (ax, ay) = a.tangent();
                    let (bx, by) = b.tangent();
                    let sign = a.piece.orientation() * (ax * by - ay * bx);
                    out.push(Crossing {
                        alpha: ai,
                        beta: bi,
                        sign: sign as i8,
                        alpha_pos: (sa, ta),
                        beta_pos: (sb, tb),
                    });
                }
            }
        }
    }
    out
}

const PIECES: [Piece; 4] = [Piece::A, Piece::APrime, Piece::QX, Piece::QY];

/// Whether `s` passes through the doubled coordinate `c2` along its own axis.
fn covers(s: &Seg, c2: i64) -> bool {
    let raw = (c2 - 2 * s.start) * s.dir;
    let t2 = if s.piece.periodic() && s.horizontal {
        raw.rem_euclid(2 * WIDTH)
    } else {
        raw
    };
    t2 > 0 && t2 < 2 * s.len
}

#[derive(Clone, Copy)]
enum Edge {
    Bottom,
    Top,
    Left,
    Right,
}

/// One piece cut into rectangles by the lines its segments lie on.
struct Grid {
    xs: Vec<i64>,
    ys: Vec<i64>,
    base: usize,
}

impl Grid {
    fn new(piece: Piece, segs: &[Seg], base: usize) -> Grid {
        let mut xs = if piece.periodic() {
            vec![0, 1000, 2000, 3000, WIDTH]
        } else {
            vec![0, HEIGHT]
        };
        let mut ys = vec![0, HEIGHT];
        for s in segs.iter().filter(|s| s.piece == piece) {
            if s.horizontal {
                ys.push(s.fixed);
            } else {
                xs.push(s.fixed);
            }
        }
        xs.sort_unstable();
        xs.dedup();
        ys.sort_unstable();
        ys.dedup();
        Grid { xs, ys, base }
    }

    fn cols(&self) -> usize {
        self.xs.len() - 1
    }

    fn rows(&self) -> usize {
        self.ys.len() - 1
    }

    fn len(&self) -> usize {
        self.cols() * self.rows()
    }

    fn cell(&self, i: usize, j: usize) -> usize {
        self.base + j * self.cols() + i
    }

    /// Cell containing a point given in doubled coordinates off every line.
    fn locate(&self, x2: i64, y2: i64) -> usize {
        let slot = |lines: &[i64], c2: i64| lines.partition_point(|&l| 2 * l < c2) - 1;
        self.cell(slot(&self.xs, x2), slot(&self.ys, y2))
    }

    /// Cells along one edge with the open interval each occupies there.
    fn edge(&self, e: Edge) -> Vec<(usize, i64, i64)> {
        match e {
            Edge::Bottom | Edge::Top => {
                let j = if matches!(e, Edge::Bottom) { 0 } else { self.rows() - 1 };
                (0..self.cols()).map(|i| (self.cell(i, j), self.xs[i], self.xs[i + 1])).collect()
            }
            Edge::Left | Edge::Right => {
                let i = if matches!(e, Edge::Left) { 0 } else { self.cols() - 1 };
                (0..self.rows()).map(|j| (self.cell(i, j), self.ys[j], self.ys[j + 1])).collect()
            }
        }
    }
}

/// Connected pieces of the closed genus-2 surface cut along all four curves.
struct Regions {
    grids: Vec<Grid>,
    uf: UnionFind,
}

impl Regions {
    fn new(paths: &[&Vec<Seg>]) -> Regions {
        let segs: Vec<Seg> = paths.iter().flat_map(|p| p.iter().copied()).collect();
        let segs = &segs[..];
        let mut grids = Vec::new();
        let mut base = 0;
        for piece in PIECES {
            let g = Grid::new(piece, segs, base);
            base += g.len();
            grids.push(g);
        }
        let mut r = Regions {
            grids,
            uf: UnionFind::new(base),
        };
        for (pi, piece) in PIECES.into_iter().enumerate() {
            r.join_inside(piece, &r.grids[pi].xs.clone(), segs);
        }
        r.glue();
        r.smooth_bends(paths);
        r
    }

    /// A curve that turns at a grid vertex only fences off the quadrant
    /// inside the turn; where two turns touch, the quadrants beside both
    /// stay connected once the corners are rounded.
    fn smooth_bends(&mut self, paths: &[&Vec<Seg>]) {
        let mut cut: BTreeMap<(Piece, i64, i64), Vec<(i64, i64)>> = BTreeMap::new();
        for path in paths {
            for (i, s) in path.iter().enumerate() {
                let next = &path[(i + 1) % path.len()];
                if next.piece != s.piece || next.horizontal == s.horizontal {
                    continue;
                }
                let end = s.start + s.dir * s.len;
                let (mut x, y) = if s.horizontal { (end, s.fixed) } else { (s.fixed, end) };
                if s.piece.periodic() {
                    x = x.rem_euclid(WIDTH);
                }
                let (ix, iy) = s.tangent();
                let (ox, oy) = next.tangent();
                // the turn hugs the quadrant between where it came from and where it goes
                cut.entry((s.piece, x, y)).or_default().push((ox - ix, oy - iy));
            }
        }
        for ((piece, x, y), quadrants) in cut {
            let open: Vec<usize> = [(1, 1), (-1, 1), (-1, -1), (1, -1)]
                .into_iter()
                .filter(|q| !quadrants.contains(q))
                .map(|(sx, sy)| {
                    let mut x2 = 2 * x + sx;
                    if piece.periodic() {
                        x2 = x2.rem_euclid(2 * WIDTH);
                    }
                    self.grid(piece).locate(x2, 2 * y + sy)
                })
                .collect();
            for w in open.windows(2) {
                self.uf.union(w[0], w[1]);
            }
        }
    }

    fn grid(&self, piece: Piece) -> &Grid {
        &self.grids[PIECES.iter().position(|&p| p == piece).unwrap()]
    }

    fn join_inside(&mut self, piece: Piece, xs: &[i64], segs: &[Seg]) {
        let g = self.grid(piece);
        let ys = g.ys.clone();
        let (cols, rows) = (g.cols(), g.rows());
        let blocked = |horizontal: bool, line: i64, mid2: i64| {
            segs.iter().any(|s| {
                s.piece == piece && s.horizontal == horizontal && s.fixed.rem_euclid(WIDTH) == line && covers(s, mid2)
            })
        };
        let mut joins = Vec::new();
        for j in 0..rows {
            for i in 0..cols {
                let wraps = piece.periodic() && i + 1 == cols;
                if i + 1 < cols || wraps {
                    let line = xs[i + 1].rem_euclid(WIDTH);
                    if !blocked(false, line, ys[j] + ys[j + 1]) {
                        joins.push(((i, j), ((i + 1) % cols, j)));
                    }
                }
                if j + 1 < rows && !blocked(true, ys[j + 1], xs[i] + xs[i + 1]) {
                    joins.push(((i, j), (i, j + 1)));
                }
            }
        }
        for ((i, j), (k, l)) in joins {
            let g = self.grid(piece);
            let (a, b) = (g.cell(i, j), g.cell(k, l));
            self.uf.union(a, b);
        }
    }

    /// Joins cells across a seam where coordinate `c` on `(q, f)` sits at
    /// `offset + scale * c` on `(p, e)`.
    fn seam(&mut self, (p, e): (Piece, Edge), (q, f): (Piece, Edge), offset: i64, scale: i64) {
        let left = self.grid(p).edge(e);
        let right: Vec<(usize, i64, i64)> = self
            .grid(q)
            .edge(f)
            .into_iter()
            .map(|(c, lo, hi)| {
                let (a, b) = (offset + scale * lo, offset + scale * hi);
                (c, a.min(b), a.max(b))
            })
            .collect();
        for &(c, lo, hi) in &left {
            for &(d, lo2, hi2) in &right {
                if lo.max(lo2) < hi.min(hi2) {
                    self.uf.union(c, d);
                }
            }
        }
    }

    /// A capping disc meets every cell along its two boundary arcs.
    fn cap(&mut self, arcs: [(Piece, Edge, i64); 2]) {
        let cells: Vec<usize> = arcs
            .iter()
            .flat_map(|&(p, e, from)| {
                self.grid(p)
                    .edge(e)
                    .into_iter()
                    .filter(move |&(_, lo, hi)| lo.max(from) < hi.min(from + 1000))
                    .map(|(c, _, _)| c)
            })
            .collect();
        for w in cells.windows(2) {
            self.uf.union(w[0], w[1]);
        }
    }

    fn glue(&mut self) {
        use Edge::*;
        use Piece::*;
        self.seam((A, Top), (QX, Bottom), 1000, 1);
        self.seam((A, Bottom), (QX, Top), 1000, 1);
        self.seam((A, Top), (QY, Bottom), 3000, 1);
        self.seam((A, Bottom), (QY, Top), 3000, 1);
        self.seam((APrime, Top), (QX, Left), 3000, 1);
        self.seam((APrime, Bottom), (QX, Right), 3000, 1);
        self.seam((APrime, Top), (QY, Right), 1000 + HEIGHT, -1);
        self.seam((APrime, Bottom), (QY, Left), 1000 + HEIGHT, -1);
        self.cap([(A, Top, 2000), (APrime, Bottom, 2000)]);
        self.cap([(A, Top, 0), (APrime, Top, 2000)]);
        self.cap([(A, Bottom, 2000), (APrime, Bottom, 0)]);
        self.cap([(A, Bottom, 0), (APrime, Top, 0)]);
    }

    /// Region just beside the segment `s`, half a unit past offset `t`.
    fn beside(&mut self, s: &Seg, t: i64, side: Side) -> usize {
        let run2 = 2 * s.start + s.dir * (2 * t + 1);
        let (tx, ty) = s.tangent();
        let flip = s.piece.orientation() * if side == Side::Left { 1 } else { -1 };
        let (nx, ny) = (-ty * flip, tx * flip);
        let (mut x2, y2) = if s.horizontal {
            (run2 + nx, 2 * s.fixed + ny)
        } else {
            (2 * s.fixed + nx, run2 + ny)
        };
        if s.piece.periodic() {
            x2 = x2.rem_euclid(2 * WIDTH);
        }
        let cell = self.grid(s.piece).locate(x2, y2);
        self.uf.find(cell)
    }
}

/// Builds `H(a1, a2, a3, a4)`. Curve parameters `(h, v)`: α1 = `(p1, -q1)`
/// and β1 = `(-p2, -q2)` in `A`; α2 = `(q3, -p3)` and β2 = `(-q4, -p4)` in
/// `A'`. `A'` carries the opposite orientation, `Q_X` is seen from `N'`
/// through a swap and `Q_Y` through an anti-swap; with these choices the
/// leftover boundary closes up in four circles, so capping gives genus 2.
/// When a region of the cut surface is not a disc, its boundary faces are
/// recorded as tubes.
pub fn template_diagram(t: &TemplateParams) -> Result<HeegaardDiagram, TemplateError> {
    let [(p1, q1), (p2, q2), (p3, q3), (p4, q4)] = t.a.map(|s| (s.p, s.q));
    let place = |piece, handle, map, cluster: i64| Placement {
        piece,
        handle,
        map,
        strand_base: if cluster == 1 { 1000 } else { 3000 },
        level_base: if cluster == 1 { 100 } else { 600 },
    };
    let alphas = vec![
        curve_path(p1, -q1, &place(Piece::A, Piece::QX, HandleMap::Direct, 1)),
        curve_path(q3, -p3, &place(Piece::APrime, Piece::QY, HandleMap::AntiSwap, 1)),
    ];
    let betas = vec![
        curve_path(-p2, -q2, &place(Piece::A, Piece::QY, HandleMap::Direct, 2)),
        curve_path(-q4, -p4, &place(Piece::APrime, Piece::QX, HandleMap::Swap, 2)),
    ];
    let mut xs = crossings(&alphas, &betas);
    let names = ["alpha1", "alpha2"];
    for (i, name) in names.iter().enumerate() {
        if !xs.iter().any(|c| c.alpha == i) {
            return Err(TemplateError::DegenerateTemplate(format!("{name} meets no beta curve")));
        }
        if !xs.iter().any(|c| c.beta == i) {
            return Err(TemplateError::DegenerateTemplate(format!("beta{} meets no alpha curve", i + 1)));
        }
    }
    xs.sort_by_key(|c| (c.alpha, c.alpha_pos));
    let points: Vec<Point> = xs
        .iter()
        .enumerate()
        .map(|(k, c)| Point {
            id: k as u64 + 1,
            alpha: c.alpha,
            beta: c.beta,
            sign: c.sign,
        })
        .collect();
    let alpha_words: Vec<Vec<u64>> = (0..2)
        .map(|i| points.iter().filter(|p| p.alpha == i).map(|p| p.id).collect())
        .collect();
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by_key(|&k| (xs[k].beta, xs[k].beta_pos));
    let beta_words: Vec<Vec<u64>> = (0..2)
        .map(|j| {
            order
                .iter()
                .filter(|&&k| xs[k].beta == j)
                .map(|&k| k as u64 + 1)
                .collect()
        })
        .collect();
    let faces = HeegaardDiagram::faces_of_words(2, points.clone(), alpha_words.clone(), beta_words.clone())?;

    // faces lying in one region of the cut surface are joined by tubes
    let paths: Vec<&Vec<Seg>> = alphas.iter().chain(&betas).collect();
    let mut regions = Regions::new(&paths);
    let mut first_in_region: BTreeMap<usize, FaceRef> = BTreeMap::new();
    let mut tubes = Vec::new();
    for face in &faces {
        let mut here = face.boundary.iter().map(|a| {
            let c = &xs[a.start as usize - 1];
            let (path, (si, t)) = match a.curve.kind {
                CurveKind::Alpha => (&alphas[a.curve.index], c.alpha_pos),
                CurveKind::Beta => (&betas[a.curve.index], c.beta_pos),
            };
            regions.beside(&path[si], t, a.side)
        });
        let region = here.next().expect("faces have boundary");
        debug_assert!(here.all(|r| r == region), "face spans two regions");
        let this = FaceRef::from_arc_side(&face.boundary[0]);
        match first_in_region.get(&region) {
            Some(&root) => tubes.push([root, this]),
            None => {
                first_in_region.insert(region, this);
            }
        }
    }
    Ok(HeegaardDiagram::new(2, points, alpha_words, beta_words, tubes)?)
}

fn serialize_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(x) => s.serialize_i64(x),
        Err(_) => s.collect_str(v),
    }
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match i64::try_from(x) {
            Ok(n) => seq.serialize_element(&n)?,
            Err(_) => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TemplateReport {
    pub slopes: [Slope; 4],
    pub matrix: Vec<Vec<i64>>,
    #[serde(serialize_with = "serialize_bigint")]
    pub det: BigInt,
    /// `|det|`, the determinant of the link.
    #[serde(serialize_with = "serialize_bigint")]
    pub link_determinant: BigInt,
    pub generator_count: u128,
    pub strong: bool,
    pub alternating: bool,
    #[serde(serialize_with = "serialize_bigints")]
    pub homology_invariants: Vec<BigInt>,
    /// One-based α indices of a reducibility witness, if any.
    pub reducible_witness: Option<Vec<usize>>,
}

pub fn template_report(t: &TemplateParams) -> Result<TemplateReport, TemplateError> {
    let h = template_diagram(t)?;
    let graph = h.intersection_graph();
    let m = graph.matrix();
    let det = m.det();
    let witness = graph
        .reducibility_witness()
        .ok()
        .flatten()
        .map(|w| w.into_iter().map(|i| i + 1).collect());
    Ok(TemplateReport {
        slopes: t.a,
        matrix: m.rows(),
        link_determinant: num_traits::Signed::abs(&det),
        det,
        generator_count: graph.matching_count(),
        strong: graph.is_strong().unwrap_or(false),
        alternating: t.same_sign(),
        homology_invariants: m.smith_invariants(),
        reducible_witness: witness,
    })
}
