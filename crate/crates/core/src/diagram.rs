//! Combinatorial Heegaard diagrams given by cyclic signed words.
//!
//! Each intersection point carries four darts (arc-ends). At a point of
//! sign `+1` their counterclockwise order is α-out, β-out, α-in, β-in; sign
//! `-1` swaps β-in and β-out. Faces are orbits of "follow the arc, then turn
//! to the next arc-end clockwise", which keeps the face on the left.
//!
//! A diagram may consist of several components (curve systems that do not
//! meet); these are joined by tubes between chosen faces, as in a connected
//! sum. Faces joined by tubes form one region.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::bigraph::IntersectionGraph;
use crate::intmat::SignedMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("parse error: {0}")]
    ParseError(String),
    #[error("inconsistent words: {0}")]
    WordInconsistency(String),
    #[error("genus mismatch: {0}")]
    GenusMismatch(String),
    #[error("disconnected complement: {0}")]
    DisconnectedComplement(String),
    #[error("split obstructed: {0}")]
    SplitObstructed(String),
    #[error("invalid wave: {0}")]
    InvalidWave(String),
    #[error("invalid anti-wave: {0}")]
    InvalidAntiwave(String),
    #[error("child diagram failed validation: {0}")]
    ChildValidationFailed(Box<DiagramError>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A curve; `index` is zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Curve {
    pub kind: CurveKind,
    pub index: usize,
}

impl Curve {
    pub fn alpha(index: usize) -> Self {
        Curve {
            kind: CurveKind::Alpha,
            index,
        }
    }

    pub fn beta(index: usize) -> Self {
        Curve {
            kind: CurveKind::Beta,
            index,
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            CurveKind::Alpha => 'a',
            CurveKind::Beta => 'b',
        };
        write!(f, "{}{}", c, self.index + 1)
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One side of an arc. The arc is the segment of `curve` running forward
/// from the point `start` to the next point on the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ArcSide {
    pub curve: Curve,
    pub start: u64,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Cyclic boundary, starting at the least arc-side.
    pub boundary: Vec<ArcSide>,
}

/// Face reference in the file format: the face on `side` of the arc of the
/// given curve leaving `point`. `index` is one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRef {
    pub curve: CurveKind,
    pub index: usize,
    pub point: u64,
    pub side: Side,
}

impl FaceRef {
    pub(crate) fn from_arc_side(a: &ArcSide) -> Self {
        FaceRef {
            curve: a.curve.kind,
            index: a.curve.index + 1,
            point: a.start,
            side: a.side,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub id: u64,
    /// Zero-based α index.
    pub alpha: usize,
    /// Zero-based β index.
    pub beta: usize,
    pub sign: i8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct PointRecord {
    id: u64,
    alpha: usize,
    beta: usize,
    sign: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiagramFile {
    genus: usize,
    points: Vec<PointRecord>,
    alpha_words: Vec<Vec<u64>>,
    beta_words: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    tubes: Vec<[FaceRef; 2]>,
}

/// Which blocks of curves go to the first child of a split (zero-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    pub alphas: Vec<usize>,
    pub betas: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveKind {
    Wave,
    Antiwave,
}

/// An arc inside `face` joining two distinct arcs of the same curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WaveRecord {
    pub kind: WaveKind,
    pub face: usize,
    pub curve: Curve,
    pub first: ArcSide,
    pub second: ArcSide,
}

const AOUT: usize = 0;
const BOUT: usize = 1;
const AIN: usize = 2;
const BIN: usize = 3;

#[derive(Debug, Clone)]
pub struct HeegaardDiagram {
    genus: usize,
    /// Sorted by id.
    points: Vec<Point>,
    alpha_words: Vec<Vec<usize>>,
    beta_words: Vec<Vec<usize>>,
    /// Tubes as given in the input; empty means the default star.
    explicit_tubes: Vec<[FaceRef; 2]>,
    alpha_pos: Vec<usize>,
    beta_pos: Vec<usize>,
    faces: Vec<Face>,
    face_of_dart: Vec<usize>,
    tubes: Vec<(usize, usize)>,
    region_of_face: Vec<usize>,
    region_count: usize,
    component_of_face: Vec<usize>,
    component_count: usize,
}

impl PartialEq for HeegaardDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.to_json() == other.to_json()
    }
}

pub(crate) struct UnionFind(Vec<usize>);

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    /// Returns false when already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.0[hi] = lo;
        true
    }
}

fn is_connected(nodes: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> bool {
    let mut uf = UnionFind::new(nodes);
    let mut parts = nodes;
    for (a, b) in edges {
        if uf.union(a, b) {
            parts -= 1;
        }
    }
    parts <= 1
}

impl HeegaardDiagram {
    fn assemble(
        genus: usize,
        points: Vec<Point>,
        alpha_words: Vec<Vec<u64>>,
        beta_words: Vec<Vec<u64>>,
        tubes: Vec<[FaceRef; 2]>,
    ) -> Result<Self, DiagramError> {
        use DiagramError::*;
        if genus == 0 {
            return Err(ParseError("genus must be positive".into()));
        }
        let mut points = points;
        points.sort_by_key(|p| p.id);
        for w in points.windows(2) {
            if w[0].id == w[1].id {
                return Err(WordInconsistency(format!("point {} listed twice", w[0].id)));
            }
        }
        for p in &points {
            if p.id == 0 {
                return Err(ParseError("point ids must be positive".into()));
            }
            if p.alpha >= genus || p.beta >= genus {
                return Err(ParseError(format!("point {} has a curve index out of range", p.id)));
            }
            if p.sign != 1 && p.sign != -1 {
                return Err(ParseError(format!("point {} has sign {}", p.id, p.sign)));
            }
        }
        if alpha_words.len() == beta_words.len() && alpha_words.len() != genus {
            return Err(GenusMismatch(format!(
                "declared genus {genus} but {} curves of each kind given",
                alpha_words.len()
            )));
        }
        if alpha_words.len() != genus || beta_words.len() != genus {
            return Err(WordInconsistency(format!(
                "expected {genus} alpha and {genus} beta words, got {} and {}",
                alpha_words.len(),
                beta_words.len()
            )));
        }
        let index: HashMap<u64, usize> = points.iter().enumerate().map(|(i, p)| (p.id, i)).collect();
        let n = points.len();
        let resolve = |words: &[Vec<u64>], kind: CurveKind| -> Result<(Vec<Vec<usize>>, Vec<usize>), DiagramError> {
            let mut pos = vec![usize::MAX; n];
            let mut out = Vec::with_capacity(words.len());
            for (c, word) in words.iter().enumerate() {
                let curve = Curve { kind, index: c };
                if word.is_empty() {
                    return Err(WordInconsistency(format!("{curve} has an empty word")));
                }
                let mut w = Vec::with_capacity(word.len());
                for (k, id) in word.iter().enumerate() {
                    let &x = index
                        .get(id)
                        .ok_or_else(|| WordInconsistency(format!("{curve} lists unknown point {id}")))?;
                    let owner = match kind {
                        CurveKind::Alpha => points[x].alpha,
                        CurveKind::Beta => points[x].beta,
                    };
                    if owner != c {
                        return Err(WordInconsistency(format!("point {id} does not lie on {curve}")));
                    }
                    if pos[x] != usize::MAX {
                        return Err(WordInconsistency(format!("point {id} repeated in {curve}")));
                    }
                    pos[x] = k;
                    w.push(x);
                }
                out.push(w);
            }
            if let Some(x) = pos.iter().position(|&p| p == usize::MAX) {
                return Err(WordInconsistency(format!(
                    "point {} missing from its {} word",
                    points[x].id,
                    match kind {
                        CurveKind::Alpha => "alpha",
                        CurveKind::Beta => "beta",
                    }
                )));
            }
            Ok((out, pos))
        };
        let (alpha_words, alpha_pos) = resolve(&alpha_words, CurveKind::Alpha)?;
        let (beta_words, beta_pos) = resolve(&beta_words, CurveKind::Beta)?;
        let h = HeegaardDiagram {
            genus,
            points,
            alpha_words,
            beta_words,
            explicit_tubes: tubes,
            alpha_pos,
            beta_pos,
            faces: Vec::new(),
            face_of_dart: Vec::new(),
            tubes: Vec::new(),
            region_of_face: Vec::new(),
            region_count: 0,
            component_of_face: Vec::new(),
            component_count: 0,
        };
        Ok(h)
    }

    /// Builds and validates a diagram. Words list point ids; indices in
    /// `points` are zero-based.
    pub fn new(
        genus: usize,
        points: Vec<Point>,
        alpha_words: Vec<Vec<u64>>,
        beta_words: Vec<Vec<u64>>,
        tubes: Vec<[FaceRef; 2]>,
    ) -> Result<Self, DiagramError> {
        let mut h = Self::assemble(genus, points, alpha_words, beta_words, tubes)?;
        h.trace_faces();
        h.validate_topology()?;
        Ok(h)
    }

    /// Faces traced from the words alone, before any genus or connectivity check.
    pub(crate) fn faces_of_words(
        genus: usize,
        points: Vec<Point>,
        alpha_words: Vec<Vec<u64>>,
        beta_words: Vec<Vec<u64>>,
    ) -> Result<Vec<Face>, DiagramError> {
        let mut h = Self::assemble(genus, points, alpha_words, beta_words, Vec::new())?;
        h.trace_faces();
        Ok(h.faces)
    }

    pub fn from_json(text: &str) -> Result<Self, DiagramError> {
        let file: DiagramFile =
            serde_json::from_str(text).map_err(|e| DiagramError::ParseError(e.to_string()))?;
        let mut points = Vec::with_capacity(file.points.len());
        for p in &file.points {
            if p.alpha == 0 || p.beta == 0 || p.alpha > file.genus || p.beta > file.genus {
                return Err(DiagramError::ParseError(format!(
                    "point {} has a curve index outside 1..={}",
                    p.id, file.genus
                )));
            }
            if p.sign != 1 && p.sign != -1 {
                return Err(DiagramError::ParseError(format!("point {} has sign {}", p.id, p.sign)));
            }
            points.push(Point {
                id: p.id,
                alpha: p.alpha - 1,
                beta: p.beta - 1,
                sign: p.sign as i8,
            });
        }
        Self::new(file.genus, points, file.alpha_words, file.beta_words, file.tubes)
    }

    fn to_file(&self) -> DiagramFile {
        let ids = |w: &Vec<usize>| w.iter().map(|&x| self.points[x].id).collect();
        DiagramFile {
            genus: self.genus,
            points: self
                .points
                .iter()
                .map(|p| PointRecord {
                    id: p.id,
                    alpha: p.alpha + 1,
                    beta: p.beta + 1,
                    sign: p.sign as i64,
                })
                .collect(),
            alpha_words: self.alpha_words.iter().map(ids).collect(),
            beta_words: self.beta_words.iter().map(ids).collect(),
            tubes: self.explicit_tubes.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("diagram serializes")
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point_count(&self) -> usize {
        self.points.len()
    }

    /// The cyclic word of a curve, as point ids.
    pub fn word(&self, curve: Curve) -> Vec<u64> {
        self.word_internal(curve).iter().map(|&x| self.points[x].id).collect()
    }

    fn word_internal(&self, curve: Curve) -> &[usize] {
        match curve.kind {
            CurveKind::Alpha => &self.alpha_words[curve.index],
            CurveKind::Beta => &self.beta_words[curve.index],
        }
    }

    fn curve_of(&self, x: usize, kind: CurveKind) -> Curve {
        let p = &self.points[x];
        match kind {
            CurveKind::Alpha => Curve::alpha(p.alpha),
            CurveKind::Beta => Curve::beta(p.beta),
        }
    }

    fn step(&self, x: usize, kind: CurveKind, forward: bool) -> usize {
        let (word, pos) = match kind {
            CurveKind::Alpha => (&self.alpha_words[self.points[x].alpha], self.alpha_pos[x]),
            CurveKind::Beta => (&self.beta_words[self.points[x].beta], self.beta_pos[x]),
        };
        let len = word.len();
        let k = if forward { (pos + 1) % len } else { (pos + len - 1) % len };
        word[k]
    }

    fn index_of(&self, id: u64) -> Option<usize> {
        self.points.binary_search_by_key(&id, |p| p.id).ok()
    }

    fn tau(&self, d: usize) -> usize {
        let x = d / 4;
        match d % 4 {
            AOUT => 4 * self.step(x, CurveKind::Alpha, true) + AIN,
            AIN => 4 * self.step(x, CurveKind::Alpha, false) + AOUT,
            BOUT => 4 * self.step(x, CurveKind::Beta, true) + BIN,
            _ => 4 * self.step(x, CurveKind::Beta, false) + BOUT,
        }
    }

    /// Next arc-end clockwise around the same point.
    fn rotate_cw(&self, d: usize) -> usize {
        let (x, k) = (d / 4, d % 4);
        let k = if self.points[x].sign > 0 { (k + 3) % 4 } else { (k + 1) % 4 };
        4 * x + k
    }

    fn arc_side_of_dart(&self, d: usize) -> ArcSide {
        let x = d / 4;
        let (kind, start, side) = match d % 4 {
            AOUT => (CurveKind::Alpha, x, Side::Left),
            AIN => (CurveKind::Alpha, self.step(x, CurveKind::Alpha, false), Side::Right),
            BOUT => (CurveKind::Beta, x, Side::Left),
            _ => (CurveKind::Beta, self.step(x, CurveKind::Beta, false), Side::Right),
        };
        ArcSide {
            curve: self.curve_of(start, kind),
            start: self.points[start].id,
            side,
        }
    }

    /// The dart whose face lies on the given side of the arc.
    fn dart_of_arc_side(&self, a: &ArcSide) -> Option<usize> {
        let x = self.index_of(a.start)?;
        if self.curve_of(x, a.curve.kind) != a.curve {
            return None;
        }
        Some(match (a.curve.kind, a.side) {
            (CurveKind::Alpha, Side::Left) => 4 * x + AOUT,
            (CurveKind::Alpha, Side::Right) => 4 * self.step(x, CurveKind::Alpha, true) + AIN,
            (CurveKind::Beta, Side::Left) => 4 * x + BOUT,
            (CurveKind::Beta, Side::Right) => 4 * self.step(x, CurveKind::Beta, true) + BIN,
        })
    }

    fn face_of_ref(&self, r: &FaceRef) -> Result<usize, DiagramError> {
        if r.index == 0 || r.index > self.genus {
            return Err(DiagramError::ParseError(format!("tube curve index {} out of range", r.index)));
        }
        let a = ArcSide {
            curve: Curve {
                kind: r.curve,
                index: r.index - 1,
            },
            start: r.point,
            side: r.side,
        };
        self.dart_of_arc_side(&a)
            .map(|d| self.face_of_dart[d])
            .ok_or_else(|| DiagramError::ParseError(format!("tube end {r:?} names no arc")))
    }

    fn trace_faces(&mut self) {
        let n = self.points.len();
        let darts = 4 * n;
        let mut orbit_of = vec![usize::MAX; darts];
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for d0 in 0..darts {
            if orbit_of[d0] != usize::MAX {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = d0;
            while orbit_of[d] == usize::MAX {
                orbit_of[d] = orbits.len();
                orbit.push(d);
                d = self.rotate_cw(self.tau(d));
            }
            orbits.push(orbit);
        }
        // canonical order: rotate each face to its least arc-side, sort faces by it
        let mut faces: Vec<(Vec<ArcSide>, Vec<usize>)> = orbits
            .into_iter()
            .map(|orbit| {
                let sides: Vec<ArcSide> = orbit.iter().map(|&d| self.arc_side_of_dart(d)).collect();
                let k = (0..sides.len()).min_by_key(|&i| sides[i]).unwrap();
                let mut s = sides;
                let mut o = orbit;
                s.rotate_left(k);
                o.rotate_left(k);
                (s, o)
            })
            .collect();
        faces.sort_by(|a, b| a.0[0].cmp(&b.0[0]));
        let mut face_of_dart = vec![0; darts];
        for (f, (_, orbit)) in faces.iter().enumerate() {
            for &d in orbit {
                face_of_dart[d] = f;
            }
        }
        self.faces = faces.into_iter().map(|(boundary, _)| Face { boundary }).collect();
        self.face_of_dart = face_of_dart;
    }

    fn validate_topology(&mut self) -> Result<(), DiagramError> {
        let n = self.points.len();
        // components: curves joined by shared points, ordered by least point id
        let g = self.genus;
        let mut uf = UnionFind::new(2 * g);
        for p in &self.points {
            uf.union(p.alpha, g + p.beta);
        }
        let mut comp_id: BTreeMap<usize, usize> = BTreeMap::new();
        let mut comp_of_point = vec![0; n];
        for (slot, p) in comp_of_point.iter_mut().zip(&self.points) {
            let root = uf.find(p.alpha);
            let next = comp_id.len();
            *slot = *comp_id.entry(root).or_insert(next);
        }
        let k = comp_id.len();
        for c in 0..2 * g {
            let root = uf.find(c);
            if !comp_id.contains_key(&root) {
                return Err(DiagramError::WordInconsistency("a curve has no points".into()));
            }
        }
        let comp_of_face: Vec<usize> = self
            .faces
            .iter()
            .enumerate()
            .map(|(f, _)| {
                let d = self.face_of_dart.iter().position(|&ff| ff == f).unwrap();
                comp_of_point[d / 4]
            })
            .collect();
        let mut v_c = vec![0usize; k];
        let mut f_c = vec![0usize; k];
        for &c in &comp_of_point {
            v_c[c] += 1;
        }
        for &c in &comp_of_face {
            f_c[c] += 1;
        }
        let mut total = 0usize;
        for c in 0..k {
            let twice = v_c[c] as i64 + 2 - f_c[c] as i64;
            if twice < 0 || twice % 2 != 0 {
                return Err(DiagramError::GenusMismatch(format!(
                    "component {} traces {} faces on {} points, which is not a closed surface",
                    c + 1,
                    f_c[c],
                    v_c[c]
                )));
            }
            total += (twice / 2) as usize;
        }
        self.component_of_face = comp_of_face;
        self.component_count = k;

        // tubes: a spanning set joins the components, any extra tube adds a handle
        let tubes: Vec<(usize, usize)> = if self.explicit_tubes.is_empty() {
            let anchor = |c: usize| -> usize {
                let x = comp_of_point.iter().position(|&cc| cc == c).unwrap();
                self.face_of_dart[4 * x + AOUT]
            };
            (1..k).map(|c| (anchor(0), anchor(c))).collect()
        } else {
            self.explicit_tubes
                .iter()
                .map(|[a, b]| Ok((self.face_of_ref(a)?, self.face_of_ref(b)?)))
                .collect::<Result<_, DiagramError>>()?
        };
        let joined = is_connected(
            k,
            tubes
                .iter()
                .map(|&(a, b)| (self.component_of_face[a], self.component_of_face[b])),
        );
        if !joined {
            return Err(DiagramError::DisconnectedComplement(format!(
                "{k} components joined by {} tubes; the surface is disconnected",
                tubes.len()
            )));
        }
        let traced = total + tubes.len() + 1 - k;
        if traced != g {
            return Err(DiagramError::GenusMismatch(format!(
                "declared genus {g}, traced genus {traced}"
            )));
        }
        let mut ruf = UnionFind::new(self.faces.len());
        for &(a, b) in &tubes {
            ruf.union(a, b);
        }
        let mut region_ids: BTreeMap<usize, usize> = BTreeMap::new();
        let mut region_of_face = vec![0; self.faces.len()];
        for (f, slot) in region_of_face.iter_mut().enumerate() {
            let root = ruf.find(f);
            let next = region_ids.len();
            *slot = *region_ids.entry(root).or_insert(next);
        }
        self.tubes = tubes;
        self.region_of_face = region_of_face;
        self.region_count = region_ids.len();

        let this = &*self;
        let across = |kind: CurveKind| (0..n).map(move |x| this.arc_regions(x, kind));
        if !is_connected(self.region_count, across(CurveKind::Beta)) {
            return Err(DiagramError::DisconnectedComplement(
                "the complement of the alpha curves is disconnected".into(),
            ));
        }
        if !is_connected(self.region_count, across(CurveKind::Alpha)) {
            return Err(DiagramError::DisconnectedComplement(
                "the complement of the beta curves is disconnected".into(),
            ));
        }
        Ok(())
    }

    /// Regions on the left and right of the arc of `kind` leaving point `x`.
    fn arc_regions(&self, x: usize, kind: CurveKind) -> (usize, usize) {
        let (out, inn) = match kind {
            CurveKind::Alpha => (AOUT, AIN),
            CurveKind::Beta => (BOUT, BIN),
        };
        let left = self.face_of_dart[4 * x + out];
        let right = self.face_of_dart[4 * self.step(x, kind, true) + inn];
        (self.region_of_face[left], self.region_of_face[right])
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Faces joined by tubes count once.
    pub fn region_count(&self) -> usize {
        self.region_count
    }

    pub fn region_of_face(&self, f: usize) -> usize {
        self.region_of_face[f]
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Tubes as pairs of face indices.
    pub fn tubes(&self) -> &[(usize, usize)] {
        &self.tubes
    }

    /// `F_c = V_c + 2 - 2 g_c` on every component, and the component genera
    /// plus the handles added by tubes give `g`. For a connected diagram
    /// without tubes this is `F = V + 2 - 2g`.
    pub fn euler_consistent(&self) -> bool {
        let k = self.component_count;
        let mut v = vec![0i64; k];
        let mut f = vec![0i64; k];
        let mut curves = vec![BTreeSet::new(); k];
        for (fi, &c) in self.component_of_face.iter().enumerate() {
            f[c] += 1;
            for a in &self.faces[fi].boundary {
                curves[c].insert(a.curve);
            }
        }
        for x in 0..self.points.len() {
            let c = self.component_of_face[self.face_of_dart[4 * x]];
            v[c] += 1;
        }
        let genera: i64 = (0..k).map(|c| (v[c] + 2 - f[c]) / 2).sum();
        genera + self.tubes.len() as i64 + 1 - k as i64 == self.genus as i64
            && (0..k).all(|c| v[c] + 2 - f[c] >= 0 && (v[c] + 2 - f[c]) % 2 == 0)
            && self.faces.iter().map(|fc| fc.boundary.len()).sum::<usize>() == 4 * self.points.len()
    }

    pub fn intersection_graph(&self) -> IntersectionGraph {
        let edges: Vec<(usize, usize, i64)> = self
            .points
            .iter()
            .map(|p| (p.alpha, p.beta, p.sign as i64))
            .collect();
        IntersectionGraph::new(self.genus, &edges).expect("validated diagram")
    }

    pub fn matrix(&self) -> SignedMatrix {
        self.intersection_graph().matrix()
    }

    pub fn generator_count(&self) -> u128 {
        self.intersection_graph().matching_count()
    }

    fn rebuild(
        &self,
        genus: usize,
        points: Vec<Point>,
        alpha_words: Vec<Vec<u64>>,
        beta_words: Vec<Vec<u64>>,
    ) -> Result<HeegaardDiagram, DiagramError> {
        HeegaardDiagram::new(genus, points, alpha_words, beta_words, Vec::new())
    }

    /// Reverses one curve: its word is reversed and the signs of its points negated.
    pub fn reverse_curve(&self, curve: Curve) -> Result<HeegaardDiagram, DiagramError> {
        let on: BTreeSet<usize> = self.word_internal(curve).iter().copied().collect();
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(x, p)| Point {
                sign: if on.contains(&x) { -p.sign } else { p.sign },
                ..*p
            })
            .collect();
        let mut alpha: Vec<Vec<u64>> = (0..self.genus).map(|i| self.word(Curve::alpha(i))).collect();
        let mut beta: Vec<Vec<u64>> = (0..self.genus).map(|i| self.word(Curve::beta(i))).collect();
        match curve.kind {
            CurveKind::Alpha => alpha[curve.index].reverse(),
            CurveKind::Beta => beta[curve.index].reverse(),
        }
        self.rebuild(self.genus, points, alpha, beta)
    }

    /// Splits along a block partition with no points from the first α block
    /// to the second β block. Children keep the projected words; points from
    /// the second α block to the first β block are dropped.
    pub fn split_connected_sum(
        &self,
        part: &BlockPartition,
    ) -> Result<(HeegaardDiagram, HeegaardDiagram), DiagramError> {
        let k = part.alphas.len();
        if part.betas.len() != k || k == 0 || k >= self.genus {
            return Err(DiagramError::SplitObstructed(
                "blocks must be proper, nonempty and of equal size".into(),
            ));
        }
        let a_in: BTreeSet<usize> = part.alphas.iter().copied().collect();
        let b_in: BTreeSet<usize> = part.betas.iter().copied().collect();
        if a_in.len() != k || b_in.len() != k || a_in.iter().chain(&b_in).any(|&i| i >= self.genus) {
            return Err(DiagramError::SplitObstructed("malformed block partition".into()));
        }
        if let Some(p) = self
            .points
            .iter()
            .find(|p| a_in.contains(&p.alpha) && !b_in.contains(&p.beta))
        {
            return Err(DiagramError::SplitObstructed(format!(
                "point {} joins the first alpha block to the second beta block",
                p.id
            )));
        }
        let child = |first: bool| -> Result<HeegaardDiagram, DiagramError> {
            let alphas: Vec<usize> = (0..self.genus).filter(|i| a_in.contains(i) == first).collect();
            let betas: Vec<usize> = (0..self.genus).filter(|j| b_in.contains(j) == first).collect();
            let keep = |p: &Point| a_in.contains(&p.alpha) == first && b_in.contains(&p.beta) == first;
            let points: Vec<Point> = self
                .points
                .iter()
                .filter(|p| keep(p))
                .map(|p| Point {
                    alpha: alphas.iter().position(|&i| i == p.alpha).unwrap(),
                    beta: betas.iter().position(|&j| j == p.beta).unwrap(),
                    ..*p
                })
                .collect();
            let project = |curve: Curve| -> Vec<u64> {
                self.word_internal(curve)
                    .iter()
                    .filter(|&&x| keep(&self.points[x]))
                    .map(|&x| self.points[x].id)
                    .collect()
            };
            let aw = alphas.iter().map(|&i| project(Curve::alpha(i))).collect();
            let bw = betas.iter().map(|&j| project(Curve::beta(j))).collect();
            self.rebuild(alphas.len(), points, aw, bw)
        };
        let wrap = |e: DiagramError| DiagramError::SplitObstructed(format!("child does not validate: {e}"));
        Ok((child(true).map_err(wrap)?, child(false).map_err(wrap)?))
    }

    /// Connected sum along face `f1` of `self` and face `f2` of `other`.
    /// Point ids of `other` are shifted past those of `self`.
    pub fn connect_sum(&self, f1: usize, other: &HeegaardDiagram, f2: usize) -> Result<HeegaardDiagram, DiagramError> {
        if f1 >= self.faces.len() || f2 >= other.faces.len() {
            return Err(DiagramError::ParseError("face index out of range".into()));
        }
        let offset = self.points.last().map_or(0, |p| p.id);
        let g1 = self.genus;
        let mut points = self.points.clone();
        points.extend(other.points.iter().map(|p| Point {
            id: p.id + offset,
            alpha: p.alpha + g1,
            beta: p.beta + g1,
            sign: p.sign,
        }));
        let words = |h: &HeegaardDiagram, kind: CurveKind, shift: u64| -> Vec<Vec<u64>> {
            (0..h.genus)
                .map(|i| {
                    h.word(Curve { kind, index: i })
                        .into_iter()
                        .map(|id| id + shift)
                        .collect()
                })
                .collect()
        };
        let mut alpha = words(self, CurveKind::Alpha, 0);
        alpha.extend(words(other, CurveKind::Alpha, offset));
        let mut beta = words(self, CurveKind::Beta, 0);
        beta.extend(words(other, CurveKind::Beta, offset));
        let shift_ref = |r: FaceRef| FaceRef {
            index: r.index + g1,
            point: r.point + offset,
            ..r
        };
        let mut tubes: Vec<[FaceRef; 2]> = self.effective_tube_refs();
        tubes.extend(other.effective_tube_refs().into_iter().map(|[a, b]| [shift_ref(a), shift_ref(b)]));
        tubes.push([
            FaceRef::from_arc_side(&self.faces[f1].boundary[0]),
            shift_ref(FaceRef::from_arc_side(&other.faces[f2].boundary[0])),
        ]);
        HeegaardDiagram::new(g1 + other.genus, points, alpha, beta, tubes)
    }

    fn effective_tube_refs(&self) -> Vec<[FaceRef; 2]> {
        self.tubes
            .iter()
            .map(|&(a, b)| {
                [
                    FaceRef::from_arc_side(&self.faces[a].boundary[0]),
                    FaceRef::from_arc_side(&self.faces[b].boundary[0]),
                ]
            })
            .collect()
    }

    /// Pairs of distinct arcs of one curve on the boundary of one face. Same
    /// side of the curve at both arcs makes a wave, opposite sides an anti-wave.
    pub fn detect_waves(&self) -> (Vec<WaveRecord>, Vec<WaveRecord>) {
        let mut waves = Vec::new();
        let mut antiwaves = Vec::new();
        for (f, face) in self.faces.iter().enumerate() {
            let mut sides: Vec<ArcSide> = face.boundary.clone();
            sides.sort();
            for i in 0..sides.len() {
                for j in i + 1..sides.len() {
                    let (s, t) = (sides[i], sides[j]);
                    if s.curve != t.curve || s.start == t.start {
                        continue;
                    }
                    let kind = if s.side == t.side { WaveKind::Wave } else { WaveKind::Antiwave };
                    let rec = WaveRecord {
                        kind,
                        face: f,
                        curve: s.curve,
                        first: s,
                        second: t,
                    };
                    match kind {
                        WaveKind::Wave => waves.push(rec),
                        WaveKind::Antiwave => antiwaves.push(rec),
                    }
                }
            }
        }
        (waves, antiwaves)
    }

    fn check_record(&self, rec: &WaveRecord) -> Result<(), String> {
        let face = self.faces.get(rec.face).ok_or("face index out of range")?;
        if rec.first.curve != rec.curve || rec.second.curve != rec.curve {
            return Err("arcs lie on different curves".into());
        }
        if rec.first.start == rec.second.start {
            return Err("both ends lie on the same arc".into());
        }
        for a in [&rec.first, &rec.second] {
            if !face.boundary.contains(a) {
                return Err(format!("arc side {a:?} is not on face {}", rec.face));
            }
        }
        let same_side = rec.first.side == rec.second.side;
        if same_side != (rec.kind == WaveKind::Wave) {
            return Err("side parity does not match the record kind".into());
        }
        Ok(())
    }

    /// Replaces the record's curve by the arc running forward from the end
    /// of one arc to the start of the other, closed up through the face.
    /// Points on the discarded part are deleted.
    fn surgery(&self, rec: &WaveRecord, first_half: bool) -> Result<HeegaardDiagram, DiagramError> {
        let word = self.word_internal(rec.curve);
        let len = word.len();
        let pos = |id: u64| {
            let x = self.index_of(id).unwrap();
            word.iter().position(|&y| y == x).unwrap()
        };
        let (p1, p2) = (pos(rec.first.start), pos(rec.second.start));
        let (from, to) = if first_half { (p1, p2) } else { (p2, p1) };
        let mut keep = Vec::new();
        let mut k = (from + 1) % len;
        loop {
            keep.push(word[k]);
            if k == to {
                break;
            }
            k = (k + 1) % len;
        }
        let kept: BTreeSet<usize> = keep.iter().copied().collect();
        let dropped: BTreeSet<usize> = word.iter().copied().filter(|x| !kept.contains(x)).collect();
        let points: Vec<Point> = self
            .points
            .iter()
            .enumerate()
            .filter(|(x, _)| !dropped.contains(x))
            .map(|(_, p)| *p)
            .collect();
        let filtered = |kind: CurveKind| -> Vec<Vec<u64>> {
            (0..self.genus)
                .map(|i| {
                    let c = Curve { kind, index: i };
                    if c == rec.curve {
                        keep.iter().map(|&x| self.points[x].id).collect()
                    } else {
                        self.word_internal(c)
                            .iter()
                            .filter(|x| !dropped.contains(x))
                            .map(|&x| self.points[x].id)
                            .collect()
                    }
                })
                .collect()
        };
        self.rebuild(self.genus, points, filtered(CurveKind::Alpha), filtered(CurveKind::Beta))
    }

    /// Both curve replacements of a wave move; each is validated on its own.
    pub fn wave_move_candidates(
        &self,
        wave: &WaveRecord,
    ) -> Result<[Result<HeegaardDiagram, DiagramError>; 2], DiagramError> {
        if wave.kind != WaveKind::Wave {
            return Err(DiagramError::InvalidWave("record is an anti-wave".into()));
        }
        self.check_record(wave).map_err(DiagramError::InvalidWave)?;
        Ok([self.surgery(wave, true), self.surgery(wave, false)])
    }

    /// The two diagrams of the anti-wave split; both must validate.
    pub fn antiwave_split(&self, anti: &WaveRecord) -> Result<(HeegaardDiagram, HeegaardDiagram), DiagramError> {
        if anti.kind != WaveKind::Antiwave {
            return Err(DiagramError::InvalidAntiwave("record is a wave".into()));
        }
        self.check_record(anti).map_err(DiagramError::InvalidAntiwave)?;
        let wrap = |e| DiagramError::ChildValidationFailed(Box::new(e));
        Ok((
            self.surgery(anti, true).map_err(wrap)?,
            self.surgery(anti, false).map_err(wrap)?,
        ))
    }

    /// Regions adjacent across α arcs, with the α index and the direction:
    /// stepping from the right side of α_i to its left counts `+1`.
    pub(crate) fn alpha_crossings(&self) -> Vec<(usize, usize, usize)> {
        (0..self.points.len())
            .map(|x| {
                let (l, r) = self.arc_regions(x, CurveKind::Alpha);
                (r, l, self.points[x].alpha)
            })
            .collect()
    }

    /// Breadth-first potentials over the region graph whose edges cross α
    /// arcs; `None` for regions unreachable from `root`.
    pub(crate) fn alpha_potentials(&self, root: usize) -> Vec<Option<Vec<i64>>> {
        let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); self.region_count];
        for (from, to, i) in self.alpha_crossings() {
            adj[from].push((to, i, 1));
            adj[to].push((from, i, -1));
        }
        let mut pot: Vec<Option<Vec<i64>>> = vec![None; self.region_count];
        pot[root] = Some(vec![0; self.genus]);
        let mut queue = VecDeque::from([root]);
        while let Some(r) = queue.pop_front() {
            let base = pot[r].clone().unwrap();
            for &(s, i, sgn) in &adj[r] {
                if pot[s].is_none() {
                    let mut v = base.clone();
                    v[i] += sgn;
                    pot[s] = Some(v);
                    queue.push_back(s);
                }
            }
        }
        pot
    }
}
