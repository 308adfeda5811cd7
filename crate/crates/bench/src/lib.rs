//! Fixed inputs for the engine benchmarks.

use matchstack::triangulation::random_history;
use matchstack::{to_tree, ColoredTernaryTree, StackTriangulation};

/// A seeded random triangulation with `n` inserted vertices.
pub fn triangulation(n: usize, seed: u64) -> StackTriangulation {
    StackTriangulation::from_history(&random_history(n, seed)).expect("random histories are valid")
}

/// The tree of [`triangulation`]; `n` must be positive.
pub fn tree(n: usize, seed: u64) -> ColoredTernaryTree {
    to_tree(&triangulation(n, seed)).expect("a grown triangulation has a tree")
}
