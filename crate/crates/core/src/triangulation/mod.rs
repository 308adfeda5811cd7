//! Rooted stack triangulations built by the growing rule.
//!
//! A triangulation is stored as its list of inner faces, each an oriented
//! triple `(a, b, c)` whose counterclockwise-marked edge is `a -> b`. Growing
//! inside face `(a, b, c)` with a new vertex `u` removes that face from the
//! list and appends `(a, b, u)`, `(b, c, u)`, `(c, a, u)` in that order, so
//! the sequence of chosen list indices (the growth history) replays the
//! construction bit for bit.

mod dual;

use std::collections::BTreeSet;
use std::fmt;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use dual::{CubicMultigraph, DualFace};

/// A vertex of a stack triangulation. `0, 1, 2` span the starting triangle,
/// `2 + i` is the vertex inserted at step `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub usize);

impl VertexId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Unordered edge, endpoints stored in ascending order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge(VertexId, VertexId);

impl Edge {
    pub fn new(u: VertexId, v: VertexId) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.0, self.1)
    }
}

/// A triangular face in counterclockwise order; the marked edge is `a -> b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[VertexId; 3]", into = "[VertexId; 3]")]
pub struct FaceRecord {
    pub a: VertexId,
    pub b: VertexId,
    pub c: VertexId,
}

impl FaceRecord {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        FaceRecord {
            a: VertexId(a),
            b: VertexId(b),
            c: VertexId(c),
        }
    }

    pub fn marked_edge(&self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    pub fn vertices(&self) -> [VertexId; 3] {
        [self.a, self.b, self.c]
    }

    /// Boundary edges in the order `ab`, `bc`, `ca`.
    pub fn edges(&self) -> [Edge; 3] {
        [
            Edge::new(self.a, self.b),
            Edge::new(self.b, self.c),
            Edge::new(self.c, self.a),
        ]
    }

    pub fn contains_edge(&self, e: Edge) -> bool {
        self.edges().contains(&e)
    }

    /// The three faces created by inserting `u`, in position order.
    fn split(&self, u: VertexId) -> [FaceRecord; 3] {
        [
            FaceRecord {
                a: self.a,
                b: self.b,
                c: u,
            },
            FaceRecord {
                a: self.b,
                b: self.c,
                c: u,
            },
            FaceRecord {
                a: self.c,
                b: self.a,
                c: u,
            },
        ]
    }
}

impl From<[VertexId; 3]> for FaceRecord {
    fn from([a, b, c]: [VertexId; 3]) -> Self {
        FaceRecord { a, b, c }
    }
}

impl From<FaceRecord> for [VertexId; 3] {
    fn from(f: FaceRecord) -> Self {
        f.vertices()
    }
}

/// Sequence of inner-face list indices chosen at each growing step.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GrowthHistory(Vec<usize>);

impl GrowthHistory {
    pub fn new(choices: Vec<usize>) -> Self {
        GrowthHistory(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks `choices[i] < 2i + 1` for every step.
    pub fn validate(&self) -> Result<()> {
        for (i, &index) in self.0.iter().enumerate() {
            let faces = 2 * i + 1;
            if index >= faces {
                return Err(Error::FaceIndexOutOfRange {
                    step: i + 1,
                    index,
                    faces,
                });
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::parse)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("history serializes")
    }
}

impl From<Vec<usize>> for GrowthHistory {
    fn from(choices: Vec<usize>) -> Self {
        GrowthHistory(choices)
    }
}

/// A rooted stack triangulation together with the history that built it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackTriangulation {
    vertex_count: usize,
    inner_faces: Vec<FaceRecord>,
    outer_face: FaceRecord,
    history: GrowthHistory,
    edges: BTreeSet<Edge>,
}

/// Object form used by the JSON export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationExport {
    pub vertices: usize,
    pub faces: Vec<FaceRecord>,
    pub outer: FaceRecord,
    pub history: GrowthHistory,
}

impl StackTriangulation {
    /// The starting triangle with root edge `0 -> 1`.
    pub fn new_root_triangle() -> Self {
        let face = FaceRecord::new(0, 1, 2);
        StackTriangulation {
            vertex_count: 3,
            inner_faces: vec![face],
            outer_face: face,
            history: GrowthHistory::default(),
            edges: face.edges().into_iter().collect(),
        }
    }

    /// Applies one growing step inside the face at `face_index`.
    pub fn grow(&self, face_index: usize) -> Result<Self> {
        let mut next = self.clone();
        next.grow_in_place(face_index)?;
        Ok(next)
    }

    pub fn grow_in_place(&mut self, face_index: usize) -> Result<()> {
        if face_index >= self.inner_faces.len() {
            return Err(Error::FaceIndexOutOfRange {
                step: self.history.len() + 1,
                index: face_index,
                faces: self.inner_faces.len(),
            });
        }
        let u = VertexId(self.vertex_count);
        let face = self.inner_faces.remove(face_index);
        self.inner_faces.extend(face.split(u));
        for v in face.vertices() {
            self.edges.insert(Edge::new(v, u));
        }
        self.vertex_count += 1;
        self.history.0.push(face_index);
        Ok(())
    }

    pub fn from_history(history: &GrowthHistory) -> Result<Self> {
        let mut tri = Self::new_root_triangle();
        for &index in history.choices() {
            tri.grow_in_place(index)?;
        }
        Ok(tri)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Number of growing steps applied to the starting triangle.
    pub fn steps(&self) -> usize {
        self.history.len()
    }

    pub fn inner_faces(&self) -> &[FaceRecord] {
        &self.inner_faces
    }

    pub fn outer_face(&self) -> FaceRecord {
        self.outer_face
    }

    pub fn history(&self) -> &GrowthHistory {
        &self.history
    }

    pub fn edges(&self) -> &BTreeSet<Edge> {
        &self.edges
    }

    /// Inner faces followed by the outer face.
    pub fn all_faces(&self) -> impl Iterator<Item = FaceRecord> + '_ {
        self.inner_faces
            .iter()
            .copied()
            .chain(std::iter::once(self.outer_face))
    }

    pub fn dual(&self) -> CubicMultigraph {
        CubicMultigraph::from_triangulation(self)
    }

    /// The rooted triangulation grown inside the face in `position` (1, 2 or
    /// 3) created by the first step, relabeled so that its boundary is
    /// `0, 1, 2` with the inherited marked edge `0 -> 1`.
    pub fn sub_triangulation(&self, position: usize) -> Result<SubTriangulation> {
        if self.steps() == 0 {
            return Err(Error::Contract(
                "the starting triangle has no sub-triangulations".into(),
            ));
        }
        if !(1..=3).contains(&position) {
            return Err(Error::Contract(format!(
                "position must be 1, 2 or 3, got {position}"
            )));
        }
        let root = FaceRecord::new(0, 1, 2).split(VertexId(3))[position - 1];
        let mut global_ids = root.vertices().to_vec();
        let mut regions: Vec<usize> = vec![1, 2, 3];
        let mut choices = Vec::new();
        for (step, &index) in self.history.choices().iter().enumerate().skip(1) {
            let region = regions[index];
            if region == position {
                let local = regions[..index].iter().filter(|&&r| r == position).count();
                choices.push(local);
                global_ids.push(VertexId(3 + step));
            }
            regions.remove(index);
            regions.extend([region; 3]);
        }
        let triangulation = Self::from_history(&GrowthHistory(choices))?;
        Ok(SubTriangulation {
            triangulation,
            global_ids,
        })
    }

    pub fn export(&self) -> TriangulationExport {
        TriangulationExport {
            vertices: self.vertex_count,
            faces: self.inner_faces.clone(),
            outer: self.outer_face,
            history: self.history.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.export()).expect("triangulation serializes")
    }

    /// Graphviz rendering; the marked edge is drawn bold.
    pub fn to_dot(&self) -> String {
        let marked = Edge::new(VertexId(0), VertexId(1));
        let mut out = String::from("graph triangulation {\n");
        for v in 0..self.vertex_count {
            writeln!(out, "  {v};").unwrap();
        }
        for &e in &self.edges {
            let (a, b) = e.endpoints();
            let style = if e == marked { " [style=bold]" } else { "" };
            writeln!(out, "  {a} -- {b}{style};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// A sub-triangulation and the map from its local vertex ids to the ids of
/// the parent triangulation.
#[derive(Clone, Debug)]
pub struct SubTriangulation {
    pub triangulation: StackTriangulation,
    pub global_ids: Vec<VertexId>,
}

/// Number of growth histories of length `n`, `1 * 3 * 5 * ... * (2n - 1)`.
pub fn history_count(n: usize) -> u128 {
    (0..n).map(|i| 2 * i as u128 + 1).product()
}

/// All growth histories of length `n` in lexicographic order.
pub fn enumerate_histories(n: usize) -> HistoryIter {
    HistoryIter {
        current: Some(vec![0; n]),
    }
}

/// Odometer over valid histories of a fixed length.
#[derive(Clone, Debug)]
pub struct HistoryIter {
    current: Option<Vec<usize>>,
}

impl Iterator for HistoryIter {
    type Item = GrowthHistory;

    fn next(&mut self) -> Option<GrowthHistory> {
        let out = self.current.clone()?;
        let digits = self.current.as_mut().unwrap();
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if digits[i] < 2 * i {
                digits[i] += 1;
                digits[i + 1..].iter_mut().for_each(|d| *d = 0);
                break;
            }
        }
        Some(GrowthHistory(out))
    }
}

/// A seeded uniform random history: step `i` picks among its `2i + 1` faces.
pub fn random_history(n: usize, seed: u64) -> GrowthHistory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_history_with(n, &mut rng)
}

/// `count` random histories of length `n` drawn from one seeded stream.
pub fn random_histories(n: usize, seed: u64, count: usize) -> Vec<GrowthHistory> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_history_with(n, &mut rng))
        .collect()
}

pub fn random_history_with<R: Rng>(n: usize, rng: &mut R) -> GrowthHistory {
    GrowthHistory((0..n).map(|i| rng.random_range(0..2 * i + 1)).collect())
}
