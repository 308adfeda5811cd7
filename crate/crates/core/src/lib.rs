//! Exact Ising groundstate degeneracy of stack triangulations.
//!
//! A rooted stack triangulation is encoded as a colored rooted ternary tree
//! whose root vector, computed by a bottom-up transfer rule, counts the
//! satisfying spin states per class of the starting triangle. Twice the sum of
//! its last three coordinates is the groundstate degeneracy, which in turn is
//! twice the number of perfect matchings of the cubic dual. Brute-force
//! oracles and golden-ratio lower bounds live alongside for verification.

pub mod bijection;
pub mod bounds;
pub mod error;
pub mod oracles;
pub mod sweep;
pub mod transfer;
pub mod triangulation;

pub use bijection::{from_tree, to_tree, ColoredTernaryTree, Label, TreeArena, TreeNode};
pub use bounds::{
    corollary_bound, corollary_bound_check, max_exponent_vector, phi_functional, psi,
    theorem_bound, theorem_bound_check, BoundVariant, ChainDecomposition, ExponentVector,
    GoldenPower, RemainderReport,
};
pub use error::{Error, Result};
pub use sweep::{Suite, SweepConfig, SweepReport};
pub use transfer::{degeneracy, degeneracy_vector, root_vector, DegeneracyVector};
pub use triangulation::{
    CubicMultigraph, Edge, FaceRecord, GrowthHistory, StackTriangulation, VertexId,
};
