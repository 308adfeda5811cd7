use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::{Edge, StackTriangulation};

/// The primal face a dual vertex stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DualFace {
    Inner(usize),
    Outer,
}

/// Geometric dual of a stack triangulation. Parallel edges are kept, so the
/// dual of the bare triangle is two vertices joined three times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicMultigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    primal_edges: Vec<Edge>,
    face_of: Vec<DualFace>,
}

#[derive(Serialize)]
struct DualJson<'a> {
    vertices: usize,
    edges: &'a [(usize, usize)],
    faces: &'a [DualFace],
}

impl CubicMultigraph {
    pub(crate) fn from_triangulation(tri: &StackTriangulation) -> Self {
        let inner = tri.inner_faces().len();
        let mut incident: HashMap<Edge, Vec<usize>> = HashMap::with_capacity(tri.edges().len());
        for (i, face) in tri.all_faces().enumerate() {
            for e in face.edges() {
                incident.entry(e).or_default().push(i);
            }
        }
        let mut edges = Vec::with_capacity(tri.edges().len());
        let mut primal_edges = Vec::with_capacity(tri.edges().len());
        for e in tri.edges() {
            let faces = &incident[e];
            debug_assert_eq!(faces.len(), 2, "edge {e:?} must bound two faces");
            edges.push((faces[0], faces[1]));
            primal_edges.push(*e);
        }
        let face_of = (0..inner)
            .map(DualFace::Inner)
            .chain(std::iter::once(DualFace::Outer))
            .collect();
        CubicMultigraph {
            vertex_count: inner + 1,
            edges,
            primal_edges,
            face_of,
        }
    }

    /// Builds a multigraph from an explicit edge list (faces are unknown).
    pub fn from_edges(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        CubicMultigraph {
            vertex_count,
            face_of: Vec::new(),
            primal_edges: Vec::new(),
            edges,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Primal edge crossed by each dual edge (empty for graphs built from a
    /// bare edge list).
    pub fn primal_edges(&self) -> &[Edge] {
        &self.primal_edges
    }

    pub fn face_of(&self) -> &[DualFace] {
        &self.face_of
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.vertex_count).all(|v| self.degree(v) == 3)
    }

    /// Neighbor lists with multiplicity; entry `(w, edge_index)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            if a != b {
                adj[b].push((a, i));
            }
        }
        adj
    }

    fn connected_without(&self, skipped: Option<usize>) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, e) in &adj[v] {
                if Some(e) != skipped && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_without(None)
    }

    /// Connected after deleting any single edge.
    pub fn is_bridgeless(&self) -> bool {
        (0..self.edges.len()).all(|e| self.connected_without(Some(e)))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph dual {\n");
        for v in 0..self.vertex_count {
            match self.face_of.get(v) {
                Some(DualFace::Outer) => writeln!(out, "  {v} [label=\"outer\"];").unwrap(),
                _ => writeln!(out, "  {v};").unwrap(),
            }
        }
        for &(a, b) in &self.edges {
            writeln!(out, "  {a} -- {b};").unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DualJson {
            vertices: self.vertex_count,
            edges: &self.edges,
            faces: &self.face_of,
        })
        .expect("dual serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{enumerate_histories, GrowthHistory};

    fn dual_of(h: &[usize]) -> CubicMultigraph {
        StackTriangulation::from_history(&GrowthHistory::new(h.to_vec()))
            .unwrap()
            .dual()
    }

    /// Adjacency multiplicity matrix, compared up to vertex permutation.
    fn isomorphic(g: &CubicMultigraph, n: usize, edges: &[(usize, usize)]) -> bool {
        if g.vertex_count() != n || g.edges().len() != edges.len() {
            return false;
        }
        let matrix = |es: &[(usize, usize)]| {
            let mut m = vec![vec![0usize; n]; n];
            for &(a, b) in es {
                m[a][b] += 1;
                m[b][a] += 1;
            }
            m
        };
        let target = matrix(edges);
        let ours = matrix(g.edges());
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            (0..n).all(|i| (0..n).all(|j| ours[p[i]][p[j]] == target[i][j]))
        })
    }

    fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if k == p.len() {
            return f(p);
        }
        for i in k..p.len() {
            p.swap(k, i);
            if permutations(p, k + 1, f) {
                return true;
            }
            p.swap(k, i);
        }
        false
    }

    #[test]
    fn triangle_dual_is_a_triple_edge() {
        let g = dual_of(&[]);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edges(), &[(0, 1), (0, 1), (0, 1)]);
        assert!(g.is_cubic());
        assert!(g.is_bridgeless());
    }

    #[test]
    fn k4_dual_is_k4() {
        let g = dual_of(&[0]);
        let k4 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        assert!(isomorphic(&g, 4, &k4));
    }

    #[test]
    fn second_step_dual_is_prism() {
        let prism = [
            (0, 1),
            (1, 2),
            (2, 0),
            (3, 4),
            (4, 5),
            (5, 3),
            (0, 3),
            (1, 4),
            (2, 5),
        ];
        for h in [[0, 0], [0, 1], [0, 2]] {
            assert!(isomorphic(&dual_of(&h), 6, &prism));
        }
        // and not, say, K_{3,3}
        let k33 = [
            (0, 3),
            (0, 4),
            (0, 5),
            (1, 3),
            (1, 4),
            (1, 5),
            (2, 3),
            (2, 4),
            (2, 5),
        ];
        assert!(!isomorphic(&dual_of(&[0, 0]), 6, &k33));
    }

    #[test]
    fn duals_are_cubic_connected_bridgeless() {
        for n in 0..=6 {
            for h in enumerate_histories(n) {
                let t = StackTriangulation::from_history(&h).unwrap();
                let g = t.dual();
                assert_eq!(g.vertex_count(), 2 * t.vertex_count() - 4);
                assert!(g.is_cubic());
                assert!(g.is_connected());
                assert!(g.is_bridgeless());
            }
        }
    }

    #[test]
    fn bridge_detection() {
        // two triangles joined by a bridge
        let g = CubicMultigraph::from_edges(
            6,
            vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3)],
        );
        assert!(g.is_connected());
        assert!(!g.is_bridgeless());
    }

    #[test]
    fn dot_repeats_parallel_edges() {
        let dot = dual_of(&[]).to_dot();
        assert_eq!(dot.matches("0 -- 1;").count(), 3);
        let k4 = dual_of(&[0]).to_dot();
        assert_eq!(k4.matches(" -- ").count(), 6);
    }
}
