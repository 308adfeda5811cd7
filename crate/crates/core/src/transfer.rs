//! Transfer vectors: satisfying-state counts bucketed by the spin class of
//! the root triangle, propagated through the triangulation's tree.
//!
//! Coordinates are indexed by the classes `+++`, `++-`, `+-+`, `-++` of the
//! root triple `(v1, v2, v3)`; a class and its global spin flip have equal
//! counts, so four coordinates describe all eight.

use std::fmt;
use std::ops::Index;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bijection::{to_tree, ColoredTernaryTree, TreeArena};
use crate::triangulation::StackTriangulation;

/// Spin classes of the root triple, in coordinate order.
pub const CLASS_NAMES: [&str; 4] = ["+++", "++-", "+-+", "-++"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DegeneracyVector(pub [BigUint; 4]);

impl DegeneracyVector {
    pub fn from_u64(v: [u64; 4]) -> Self {
        DegeneracyVector(v.map(BigUint::from))
    }

    /// The bare triangle, `(0, 1, 1, 1)`.
    pub fn triangle() -> Self {
        Self::from_u64([0, 1, 1, 1])
    }

    pub fn ones() -> Self {
        Self::from_u64([1, 1, 1, 1])
    }

    pub fn coords(&self) -> &[BigUint; 4] {
        &self.0
    }

    /// `self >= other` in every coordinate.
    pub fn dominates(&self, other: &DegeneracyVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// Sum of the four coordinates; half the number of satisfying states.
    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }

    pub fn to_decimal(&self) -> [String; 4] {
        self.0.clone().map(|x| x.to_str_radix(10))
    }
}

impl Index<usize> for DegeneracyVector {
    type Output = BigUint;

    fn index(&self, s: usize) -> &BigUint {
        &self.0[s]
    }
}

impl fmt::Display for DegeneracyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "({a},{b},{c},{d})")
    }
}

impl Serialize for DegeneracyVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_decimal().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DegeneracyVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = <[String; 4]>::deserialize(deserializer)?;
        let mut out: [BigUint; 4] = Default::default();
        for (slot, text) in out.iter_mut().zip(&raw) {
            *slot = text
                .parse()
                .map_err(|_| D::Error::custom(format!("not a decimal integer: {text:?}")))?;
        }
        Ok(DegeneracyVector(out))
    }
}

/// Vector of a triangulation split at its first inserted vertex, from the
/// vectors of the three sub-triangulations in positions 1, 2, 3.
pub fn combine_children(
    v1: &DegeneracyVector,
    v2: &DegeneracyVector,
    v3: &DegeneracyVector,
) -> DegeneracyVector {
    let (a, b, c) = (&v1.0, &v2.0, &v3.0);
    let term = |i: usize, j: usize, k: usize| &a[i] * &b[j] * &c[k];
    DegeneracyVector([
        term(0, 0, 0) + term(1, 1, 1),
        term(0, 2, 3) + term(1, 3, 2),
        term(2, 3, 0) + term(3, 2, 1),
        term(2, 1, 3) + term(3, 0, 2),
    ])
}

fn rule_one(u: &DegeneracyVector, label: u8) -> DegeneracyVector {
    let [u0, u1, u2, u3] = &u.0;
    let sum = u0 + u1;
    DegeneracyVector(match label {
        1 => [u1.clone(), sum, u3.clone(), u2.clone()],
        2 => [u1.clone(), u3.clone(), u2.clone(), sum],
        3 => [u1.clone(), u2.clone(), sum, u3.clone()],
        _ => unreachable!("labels are validated"),
    })
}

/// Two children `u`, `w` whose label pair `(l_u, l_w)` is one of
/// `(1,2)`, `(2,3)`, `(3,1)`; `first` is `l_u`.
fn rule_two(u: &DegeneracyVector, w: &DegeneracyVector, first: u8) -> DegeneracyVector {
    let ([u0, u1, u2, u3], [w0, w1, w2, w3]) = (&u.0, &w.0);
    let a = u1 * w1;
    let b = u0 * w2 + u1 * w3;
    let c = u3 * w2;
    let d = u2 * w1 + u3 * w0;
    DegeneracyVector(match first {
        1 => [a, b, c, d],
        2 => [a, c, d, b],
        3 => [a, d, b, c],
        _ => unreachable!("labels are validated"),
    })
}

fn node_vector(kids: &[(u8, DegeneracyVector)]) -> DegeneracyVector {
    match kids {
        [] => DegeneracyVector::ones(),
        [(l, u)] => rule_one(u, *l),
        // children are label sorted; (1,3) is the pair (3,1) swapped
        [(1, x), (2, y)] => rule_two(x, y, 1),
        [(2, x), (3, y)] => rule_two(x, y, 2),
        [(1, x), (3, y)] => rule_two(y, x, 3),
        [(_, u), (_, w), (_, z)] => combine_children(u, w, z),
        _ => unreachable!("labels are validated"),
    }
}

/// Root vector of a colored tree by Rules 0 to 3, evaluated bottom-up in
/// reverse preorder so deep trees need no recursion.
pub fn root_vector(tree: &ColoredTernaryTree) -> DegeneracyVector {
    let arena = TreeArena::new(tree);
    let mut done: Vec<Option<DegeneracyVector>> = vec![None; arena.len()];
    for v in (0..arena.len()).rev() {
        let kids: Vec<(u8, DegeneracyVector)> = arena
            .children(v)
            .iter()
            .map(|&c| {
                (
                    arena.label(c).expect("validated tree"),
                    done[c].take().unwrap(),
                )
            })
            .collect();
        done[v] = Some(node_vector(&kids));
    }
    done[0].take().unwrap()
}

/// Degeneracy vector of a rooted stack triangulation, via its tree.
pub fn degeneracy_vector(tri: &StackTriangulation) -> DegeneracyVector {
    match to_tree(tri) {
        Ok(tree) => root_vector(&tree),
        Err(_) => DegeneracyVector::triangle(),
    }
}

/// Degeneracy vector by direct recursion over the face subdivision: every
/// unsplit face contributes `(0,1,1,1)` and every split face combines its
/// three sub-faces.
pub fn degeneracy_vector_by_faces(tri: &StackTriangulation) -> DegeneracyVector {
    // arena of faces; a split face lists its three sub-faces
    let mut split: Vec<Option<[usize; 3]>> = vec![None];
    let mut live: Vec<usize> = vec![0];
    for &index in tri.history().choices() {
        let face = live.remove(index);
        let first = split.len();
        split.extend([None, None, None]);
        split[face] = Some([first, first + 1, first + 2]);
        live.extend([first, first + 1, first + 2]);
    }
    let mut vectors: Vec<Option<DegeneracyVector>> = vec![None; split.len()];
    for face in (0..split.len()).rev() {
        vectors[face] = Some(match split[face] {
            None => DegeneracyVector::triangle(),
            Some([a, b, c]) => {
                let take = |i: usize, vs: &mut Vec<Option<DegeneracyVector>>| vs[i].take().unwrap();
                let (va, vb, vc) = (
                    take(a, &mut vectors),
                    take(b, &mut vectors),
                    take(c, &mut vectors),
                );
                combine_children(&va, &vb, &vc)
            }
        });
    }
    vectors[0].take().unwrap()
}

/// Number of groundstates: `2 * (v1 + v2 + v3)`. Class `+++` frustrates the
/// whole outer face and never contributes.
pub fn degeneracy(v: &DegeneracyVector) -> BigUint {
    (&v.0[1] + &v.0[2] + &v.0[3]) << 1
}

/// `true` when every coordinate is at least one.
pub fn is_positive(v: &DegeneracyVector) -> bool {
    v.0.iter().all(|x| !x.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::enumerate_trees;
    use crate::triangulation::{enumerate_histories, random_history, GrowthHistory};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dv(v: [u64; 4]) -> DegeneracyVector {
        DegeneracyVector::from_u64(v)
    }

    fn tri(h: &[usize]) -> StackTriangulation {
        StackTriangulation::from_history(&GrowthHistory::new(h.to_vec())).unwrap()
    }

    fn tree(json: &str) -> ColoredTernaryTree {
        ColoredTernaryTree::from_json(json).unwrap()
    }

    #[test]
    fn combine_triangles_gives_ones() {
        let t = DegeneracyVector::triangle();
        assert_eq!(combine_children(&t, &t, &t), DegeneracyVector::ones());
    }

    #[test]
    fn rules_are_combine_with_empty_faces() {
        let t = DegeneracyVector::triangle();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut r = || dv([0; 4].map(|_| rng.random_range(0..1000)));
            let (u, w) = (r(), r());
            assert_eq!(rule_one(&u, 1), combine_children(&u, &t, &t));
            assert_eq!(rule_one(&u, 2), combine_children(&t, &u, &t));
            assert_eq!(rule_one(&u, 3), combine_children(&t, &t, &u));
            assert_eq!(rule_two(&u, &w, 1), combine_children(&u, &w, &t));
            assert_eq!(rule_two(&u, &w, 2), combine_children(&t, &u, &w));
            assert_eq!(rule_two(&u, &w, 3), combine_children(&w, &t, &u));
        }
    }

    #[test]
    fn small_root_vectors() {
        assert_eq!(
            root_vector(&ColoredTernaryTree::single_node()),
            dv([1, 1, 1, 1])
        );
        let one = tree(r#"{"label":null,"children":[{"label":1,"children":[]}]}"#);
        assert_eq!(root_vector(&one), dv([1, 2, 1, 1]));
        let two = tree(
            r#"{"label":null,"children":[{"label":1,"children":[]},{"label":2,"children":[]}]}"#,
        );
        assert_eq!(root_vector(&two), dv([1, 2, 1, 2]));
        let three = tree(
            r#"{"label":null,"children":[{"label":1,"children":[]},{"label":2,"children":[]},{"label":3,"children":[]}]}"#,
        );
        assert_eq!(root_vector(&three), dv([2, 2, 2, 2]));
    }

    #[test]
    fn fixed_points() {
        assert_eq!(degeneracy_vector(&tri(&[])), dv([0, 1, 1, 1]));
        assert_eq!(degeneracy_vector(&tri(&[0])), dv([1, 1, 1, 1]));
        assert_eq!(degeneracy_vector(&tri(&[0, 0])), dv([1, 2, 1, 1]));
        assert_eq!(degeneracy(&dv([0, 1, 1, 1])), BigUint::from(6u32));
        assert_eq!(degeneracy(&dv([1, 1, 1, 1])), BigUint::from(6u32));
        assert_eq!(degeneracy(&dv([1, 2, 1, 1])), BigUint::from(8u32));
        assert_eq!(degeneracy(&dv([999, 1, 1, 1])), BigUint::from(6u32));
    }

    #[test]
    fn two_paths_agree() {
        for n in 0..=5 {
            for h in enumerate_histories(n) {
                let d = StackTriangulation::from_history(&h).unwrap();
                assert_eq!(
                    degeneracy_vector(&d),
                    degeneracy_vector_by_faces(&d),
                    "{h:?}"
                );
            }
        }
        for seed in 0..50 {
            let d = StackTriangulation::from_history(&random_history(40, seed)).unwrap();
            assert_eq!(degeneracy_vector(&d), degeneracy_vector_by_faces(&d));
        }
    }

    #[test]
    fn root_vectors_are_positive() {
        for n in 1..=6 {
            assert!(enumerate_trees(n).all(|t| is_positive(&root_vector(&t))));
        }
    }

    #[test]
    fn json_is_decimal_strings() {
        let v = dv([0, 1, 2, u64::MAX]);
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"["0","1","2","18446744073709551615"]"#);
        let back: DegeneracyVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert!(serde_json::from_str::<DegeneracyVector>(r#"["1","x","1","1"]"#).is_err());
    }

    #[test]
    fn large_instances_do_not_overflow() {
        let d = StackTriangulation::from_history(&random_history(400, 5)).unwrap();
        let v = degeneracy_vector(&d);
        assert!(v.0.iter().any(|x| x.bits() > 64));
    }
}
