//! Brute-force ground truths, independent of the transfer recurrences:
//! spin-state enumeration for the antiferromagnetic Ising model, perfect
//! matchings of the dual and intersecting edge sets of the primal.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::transfer::DegeneracyVector;
use crate::triangulation::{CubicMultigraph, Edge, StackTriangulation, VertexId};

/// Largest vertex count accepted by the spin-state enumerations.
pub const SPIN_GUARD: usize = 30;
/// Largest dual vertex count accepted by the matching counter.
pub const MATCHING_GUARD: usize = 40;
/// Largest primal edge count accepted by the intersecting-set search.
pub const INTERSECTING_GUARD: usize = 45;

/// Below this many vertices the state space is scanned on one thread.
const PARALLEL_FROM: usize = 16;

/// A spin assignment: `+1` or `-1` per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpinState(Vec<i8>);

impl SpinState {
    pub fn new(spins: Vec<i8>) -> Result<Self> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Contract("spins must be +1 or -1".into()));
        }
        Ok(SpinState(spins))
    }

    /// Bit `v` of `mask` set means vertex `v` carries spin `-1`.
    pub fn from_mask(mask: u64, vertices: usize) -> Self {
        SpinState(
            (0..vertices)
                .map(|v| if mask >> v & 1 == 1 { -1 } else { 1 })
                .collect(),
        )
    }

    pub fn spin(&self, v: VertexId) -> Option<i8> {
        self.0.get(v.0).copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Ising model on a triangulation with coupling `-1` on every edge.
#[derive(Clone, Copy, Debug)]
pub struct IsingInstance<'a> {
    pub triangulation: &'a StackTriangulation,
}

impl<'a> IsingInstance<'a> {
    pub fn new(triangulation: &'a StackTriangulation) -> Self {
        IsingInstance { triangulation }
    }

    pub fn coupling(&self, _e: Edge) -> i64 {
        -1
    }
}

/// `-sum c(e) s(u) s(v)` over all edges.
pub fn energy(inst: &IsingInstance<'_>, s: &SpinState) -> Result<i64> {
    let n = inst.triangulation.vertex_count();
    if s.len() < n {
        return Err(Error::Contract(format!(
            "state assigns {} of {n} vertices",
            s.len()
        )));
    }
    Ok(inst
        .triangulation
        .edges()
        .iter()
        .map(|&e| {
            let (u, v) = e.endpoints();
            let product = (s.0[u.0] * s.0[v.0]) as i64;
            -inst.coupling(e) * product
        })
        .sum())
}

fn guard(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        Err(Error::SizeGuard { what, size, limit })
    } else {
        Ok(())
    }
}

fn frustrated(mask: u64, u: VertexId, v: VertexId) -> bool {
    (mask >> u.0 & 1) == (mask >> v.0 & 1)
}

fn satisfies(mask: u64, face: &[VertexId; 3]) -> bool {
    let [a, b, c] = *face;
    frustrated(mask, a, b) as u8 + frustrated(mask, b, c) as u8 + frustrated(mask, c, a) as u8 == 1
}

/// Folds `f` over every state mask, splitting large spaces into contiguous
/// ranges evaluated in parallel.
fn scan_states<T, F, R>(vertices: usize, init: T, per_state: F, reduce: R) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, u64) + Sync,
    R: Fn(T, T) -> T + Sync + Send,
{
    let total = 1u64 << vertices;
    if vertices < PARALLEL_FROM {
        let mut acc = init;
        (0..total).for_each(|m| per_state(&mut acc, m));
        return acc;
    }
    let chunk = 1u64 << 12;
    (0..total / chunk)
        .into_par_iter()
        .map(|c| {
            let mut acc = init.clone();
            (c * chunk..(c + 1) * chunk).for_each(|m| per_state(&mut acc, m));
            acc
        })
        .reduce(|| init.clone(), &reduce)
}

/// Satisfying states counted for each of the eight spin assignments of the
/// root triple `(0, 1, 2)`; index bit `k` set means vertex `k` is `-1`.
pub fn count_satisfying_all_classes(tri: &StackTriangulation) -> Result<[u64; 8]> {
    let n = tri.vertex_count();
    guard("spin enumeration", n, SPIN_GUARD)?;
    let faces: Vec<[VertexId; 3]> = tri.inner_faces().iter().map(|f| f.vertices()).collect();
    Ok(scan_states(
        n,
        [0u64; 8],
        |acc, mask| {
            if faces.iter().all(|f| satisfies(mask, f)) {
                acc[(mask & 7) as usize] += 1;
            }
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    ))
}

/// Per-class satisfying-state counts for the classes `+++`, `++-`, `+-+`,
/// `-++` of the root triple.
pub fn count_satisfying_by_class(tri: &StackTriangulation) -> Result<DegeneracyVector> {
    let all = count_satisfying_all_classes(tri)?;
    // mask bits are (v0, v1, v2): +++ = 0, ++- = 0b100, +-+ = 0b010, -++ = 0b001
    Ok(DegeneracyVector::from_u64([all[0], all[4], all[2], all[1]]))
}

/// Number of minimum-energy states. Also checks that the minimizers are
/// exactly the satisfying states that satisfy the outer face.
pub fn count_groundstates(tri: &StackTriangulation) -> Result<BigUint> {
    let n = tri.vertex_count();
    guard("spin enumeration", n, SPIN_GUARD)?;
    let edges: Vec<(VertexId, VertexId)> = tri.edges().iter().map(|e| e.endpoints()).collect();
    let faces: Vec<[VertexId; 3]> = tri.all_faces().map(|f| f.vertices()).collect();
    let energy_of = |mask: u64| -> i64 {
        edges
            .iter()
            .map(|&(u, v)| if frustrated(mask, u, v) { 1 } else { -1 })
            .sum()
    };

    let min = scan_states(
        n,
        i64::MAX,
        |acc, m| *acc = (*acc).min(energy_of(m)),
        i64::min,
    );
    // (minimizers, minimizers that are face satisfying, face satisfying states)
    let (ground, both, satisfying) = scan_states(
        n,
        (0u64, 0u64, 0u64),
        |acc, m| {
            let is_ground = energy_of(m) == min;
            let is_sat = faces.iter().all(|f| satisfies(m, f));
            acc.0 += is_ground as u64;
            acc.1 += (is_ground && is_sat) as u64;
            acc.2 += is_sat as u64;
        },
        |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2),
    );
    if ground != both || ground != satisfying {
        return Err(Error::OracleMismatch(format!(
            "{ground} groundstates but {satisfying} states satisfying every face ({both} in common)"
        )));
    }
    Ok(BigUint::from(ground))
}

/// Perfect matchings by branching on a minimum-degree vertex, memoized on
/// the bitmask of unmatched vertices. Parallel edges are distinct choices.
pub fn count_perfect_matchings(g: &CubicMultigraph) -> Result<BigUint> {
    let n = g.vertex_count();
    guard("perfect matching count", n, MATCHING_GUARD)?;
    if n % 2 == 1 {
        return Ok(BigUint::default());
    }
    let adj: Vec<Vec<usize>> = g
        .adjacency()
        .into_iter()
        .enumerate()
        .map(|(v, list)| {
            list.into_iter()
                .map(|(w, _)| w)
                .filter(|&w| w != v)
                .collect()
        })
        .collect();
    let mut memo: HashMap<u64, BigUint> = HashMap::new();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(matchings(full, &adj, &mut memo))
}

fn matchings(mask: u64, adj: &[Vec<usize>], memo: &mut HashMap<u64, BigUint>) -> BigUint {
    if mask == 0 {
        return BigUint::from(1u32);
    }
    if let Some(hit) = memo.get(&mask) {
        return hit.clone();
    }
    let live = |w: usize| mask >> w & 1 == 1;
    let mut best: Option<(usize, usize)> = None;
    let mut rest = mask;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        let degree = adj[v].iter().filter(|&&w| live(w)).count();
        if best.is_none_or(|(_, d)| degree < d) {
            best = Some((v, degree));
        }
    }
    let (v, _) = best.unwrap();
    let mut total = BigUint::default();
    for &w in adj[v].iter().filter(|&&w| live(w)) {
        total += matchings(mask & !(1 << v) & !(1 << w), adj, memo);
    }
    memo.insert(mask, total.clone());
    total
}

/// Calls `visit` with every edge set meeting each face (outer included) in
/// exactly one edge. Faces are processed in list order; each face without a
/// chosen edge branches over its edges whose other face is still free.
pub fn for_each_intersecting_set<F: FnMut(&[Edge])>(
    tri: &StackTriangulation,
    mut visit: F,
) -> Result<()> {
    guard(
        "intersecting set search",
        tri.edges().len(),
        INTERSECTING_GUARD,
    )?;
    let edges: Vec<Edge> = tri.edges().iter().copied().collect();
    let index: HashMap<Edge, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let face_edges: Vec<[usize; 3]> = tri
        .all_faces()
        .map(|f| f.edges().map(|e| index[&e]))
        .collect();
    let mut edge_faces = vec![Vec::with_capacity(2); edges.len()];
    for (f, es) in face_edges.iter().enumerate() {
        for &e in es {
            edge_faces[e].push(f);
        }
    }

    struct Search<'a, F> {
        edges: &'a [Edge],
        face_edges: &'a [[usize; 3]],
        edge_faces: &'a [Vec<usize>],
        covered: Vec<bool>,
        chosen: Vec<usize>,
        visit: F,
    }

    impl<F: FnMut(&[Edge])> Search<'_, F> {
        fn run(&mut self, face: usize) {
            if face == self.face_edges.len() {
                let set: Vec<Edge> = self.chosen.iter().map(|&e| self.edges[e]).collect();
                (self.visit)(&set);
                return;
            }
            if self.covered[face] {
                return self.run(face + 1);
            }
            for e in self.face_edges[face] {
                if self.edge_faces[e].iter().any(|&g| self.covered[g]) {
                    continue;
                }
                for &g in &self.edge_faces[e] {
                    self.covered[g] = true;
                }
                self.chosen.push(e);
                self.run(face + 1);
                self.chosen.pop();
                for &g in &self.edge_faces[e] {
                    self.covered[g] = false;
                }
            }
        }
    }

    let mut search = Search {
        edges: &edges,
        face_edges: &face_edges,
        edge_faces: &edge_faces,
        covered: vec![false; face_edges.len()],
        chosen: Vec::new(),
        visit: &mut visit,
    };
    search.run(0);
    Ok(())
}

pub fn count_intersecting_sets(tri: &StackTriangulation) -> Result<BigUint> {
    let mut count = 0u64;
    for_each_intersecting_set(tri, |_| count += 1)?;
    Ok(BigUint::from(count))
}

/// Whether the triangulation minus `removed` is bipartite.
pub fn is_bipartite_without(tri: &StackTriangulation, removed: &BTreeSet<Edge>) -> bool {
    let n = tri.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for e in tri.edges().iter().filter(|e| !removed.contains(e)) {
        let (u, v) = e.endpoints();
        adj[u.0].push(v.0);
        adj[v.0].push(u.0);
    }
    let mut side: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let s = side[v].unwrap();
            for &w in &adj[v] {
                match side[w] {
                    None => {
                        side[w] = Some(!s);
                        stack.push(w);
                    }
                    Some(t) if t == s => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{enumerate_histories, random_history, GrowthHistory};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tri(h: &[usize]) -> StackTriangulation {
        StackTriangulation::from_history(&GrowthHistory::new(h.to_vec())).unwrap()
    }

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn energies() {
        let t0 = tri(&[]);
        let inst = IsingInstance::new(&t0);
        assert_eq!(
            energy(&inst, &SpinState::new(vec![1, 1, 1]).unwrap()).unwrap(),
            3
        );
        assert_eq!(
            energy(&inst, &SpinState::new(vec![1, 1, -1]).unwrap()).unwrap(),
            -1
        );
        let k4 = tri(&[0]);
        let inst = IsingInstance::new(&k4);
        assert_eq!(
            energy(&inst, &SpinState::new(vec![1, 1, -1, -1]).unwrap()).unwrap(),
            -2
        );
        assert!(energy(&inst, &SpinState::new(vec![1, 1, 1]).unwrap()).is_err());
        assert!(SpinState::new(vec![1, 0]).is_err());
    }

    #[test]
    fn energy_bookkeeping() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let n = rng.random_range(0..10);
            let t = StackTriangulation::from_history(&random_history(n, rng.random())).unwrap();
            let mask = rng.random_range(0..1u64 << t.vertex_count());
            let s = SpinState::from_mask(mask, t.vertex_count());
            let unfrustrated = t
                .edges()
                .iter()
                .filter(|e| {
                    let (u, v) = e.endpoints();
                    s.spin(u) != s.spin(v)
                })
                .count() as i64;
            let e = energy(&IsingInstance::new(&t), &s).unwrap();
            assert_eq!(e, t.edges().len() as i64 - 2 * unfrustrated);
        }
    }

    #[test]
    fn class_counts() {
        assert_eq!(
            count_satisfying_by_class(&tri(&[])).unwrap(),
            DegeneracyVector::triangle()
        );
        assert_eq!(
            count_satisfying_by_class(&tri(&[0])).unwrap(),
            DegeneracyVector::ones()
        );
        assert_eq!(
            count_satisfying_by_class(&tri(&[0, 0])).unwrap(),
            DegeneracyVector::from_u64([1, 2, 1, 1])
        );
    }

    #[test]
    fn flip_symmetry() {
        for n in 0..=4 {
            for h in enumerate_histories(n) {
                let c =
                    count_satisfying_all_classes(&StackTriangulation::from_history(&h).unwrap())
                        .unwrap();
                for k in 0..8 {
                    assert_eq!(c[k], c[7 - k]);
                }
            }
        }
    }

    #[test]
    fn groundstates() {
        assert_eq!(count_groundstates(&tri(&[])).unwrap(), big(6));
        assert_eq!(count_groundstates(&tri(&[0])).unwrap(), big(6));
        assert_eq!(count_groundstates(&tri(&[0, 0])).unwrap(), big(8));
    }

    #[test]
    fn matchings_of_small_graphs() {
        assert_eq!(count_perfect_matchings(&tri(&[]).dual()).unwrap(), big(3));
        assert_eq!(count_perfect_matchings(&tri(&[0]).dual()).unwrap(), big(3));
        assert_eq!(
            count_perfect_matchings(&tri(&[0, 0]).dual()).unwrap(),
            big(4)
        );
        // K_{3,3} has 3! = 6, the cube graph has 9
        let k33 = CubicMultigraph::from_edges(
            6,
            (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect(),
        );
        assert_eq!(count_perfect_matchings(&k33).unwrap(), big(6));
        let cube: Vec<(usize, usize)> = (0..8usize)
            .flat_map(|v| (0..3).map(move |k| (v, v ^ (1 << k))))
            .filter(|(a, b)| a < b)
            .collect();
        assert_eq!(
            count_perfect_matchings(&CubicMultigraph::from_edges(8, cube)).unwrap(),
            big(9)
        );
        let odd = CubicMultigraph::from_edges(3, vec![(0, 1), (1, 2)]);
        assert_eq!(count_perfect_matchings(&odd).unwrap(), big(0));
    }

    #[test]
    fn intersecting_sets() {
        assert_eq!(count_intersecting_sets(&tri(&[])).unwrap(), big(3));
        assert_eq!(count_intersecting_sets(&tri(&[0])).unwrap(), big(3));
        assert_eq!(count_intersecting_sets(&tri(&[0, 0])).unwrap(), big(4));
    }

    #[test]
    fn triple_equality() {
        for n in 0..=4 {
            for h in enumerate_histories(n) {
                let t = StackTriangulation::from_history(&h).unwrap();
                let g = count_groundstates(&t).unwrap();
                let i = count_intersecting_sets(&t).unwrap();
                let m = count_perfect_matchings(&t.dual()).unwrap();
                assert_eq!(g, &i << 1);
                assert_eq!(i, m);
            }
        }
    }

    #[test]
    fn intersecting_sets_leave_bipartite_graphs() {
        for n in 0..=4 {
            for h in enumerate_histories(n) {
                let t = StackTriangulation::from_history(&h).unwrap();
                for_each_intersecting_set(&t, |set| {
                    let removed: BTreeSet<Edge> = set.iter().copied().collect();
                    assert!(is_bipartite_without(&t, &removed));
                })
                .unwrap();
            }
        }
        assert!(!is_bipartite_without(&tri(&[0]), &BTreeSet::new()));
    }

    #[test]
    fn guards_refuse() {
        let big_tri = StackTriangulation::from_history(&random_history(30, 1)).unwrap();
        assert!(matches!(
            count_groundstates(&big_tri),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            count_satisfying_by_class(&big_tri),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            count_perfect_matchings(&big_tri.dual()),
            Err(Error::SizeGuard { .. })
        ));
        assert!(matches!(
            count_intersecting_sets(&big_tri),
            Err(Error::SizeGuard { .. })
        ));
    }

    #[test]
    fn parallel_scan_matches_serial() {
        // 16 vertices takes the chunked path
        let t = StackTriangulation::from_history(&random_history(13, 9)).unwrap();
        assert_eq!(t.vertex_count(), 16);
        let by_class = count_satisfying_by_class(&t).unwrap();
        assert_eq!(by_class, crate::transfer::degeneracy_vector(&t));
        assert_eq!(
            count_groundstates(&t).unwrap(),
            crate::transfer::degeneracy(&by_class)
        );
    }
}
