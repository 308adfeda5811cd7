//! Witness search for the chain decomposition `T_v = T_ṽ ∪ P_{ṽ,v}`.

use serde::{Deserialize, Serialize};

use crate::bijection::{ColoredTernaryTree, TreeArena};
use crate::error::{Error, Result};
use crate::transfer::root_vector;

use super::remainders::find_in_arena;
use super::{max_exponent_vector, psi, ExponentVector};

/// Largest admissible chain length `||P_{ṽ,v}||`.
pub const MAX_CHAIN: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Candidate {
    /// Preorder id of `ṽ`.
    pub node: usize,
    pub depth: usize,
    pub subtree_size: usize,
    pub exponents: ExponentVector,
    pub psi: u64,
}

impl Candidate {
    /// `2 psi >= |T_ṽ| + 7`.
    pub fn qualifies(&self) -> bool {
        2 * self.psi >= self.subtree_size as u64 + 7
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainDecomposition {
    /// Preorder ids from the root `v` down to `ṽ`.
    pub chain: Vec<usize>,
    pub length: usize,
    pub subtree_root: usize,
    pub subtree_size: usize,
    pub exponents: ExponentVector,
    pub psi: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum MainLemmaOutcome {
    Witness(ChainDecomposition),
    NoWitness { candidates: Vec<Candidate> },
}

impl MainLemmaOutcome {
    pub fn witness(&self) -> Option<&ChainDecomposition> {
        match self {
            MainLemmaOutcome::Witness(c) => Some(c),
            MainLemmaOutcome::NoWitness { .. } => None,
        }
    }
}

pub fn verify_main_lemma(tree: &ColoredTernaryTree) -> Result<MainLemmaOutcome> {
    if tree.size() < 4 {
        return Err(Error::Contract(format!(
            "tree has {} nodes, at least 4 required",
            tree.size()
        )));
    }
    let arena = TreeArena::new(tree);
    let report = find_in_arena(&arena);
    if let (Some(r), Some(g)) = (report.remainders.first(), report.generators.first()) {
        return Err(Error::Contract(format!(
            "tree has remainder {r:?} with generator {g}"
        )));
    }

    let mut chain = vec![0];
    let mut candidates = Vec::new();
    loop {
        let node = *chain.last().unwrap();
        let exponents = max_exponent_vector(&root_vector(&arena.subtree(node)))?;
        let candidate = Candidate {
            node,
            depth: chain.len() - 1,
            subtree_size: arena.subtree_size(node),
            exponents,
            psi: psi(&exponents),
        };
        if candidate.qualifies() {
            return Ok(MainLemmaOutcome::Witness(ChainDecomposition {
                length: candidate.depth,
                subtree_root: node,
                subtree_size: candidate.subtree_size,
                exponents,
                psi: candidate.psi,
                chain,
            }));
        }
        candidates.push(candidate);
        match arena.children(node) {
            [only] if chain.len() <= MAX_CHAIN => chain.push(*only),
            _ => return Ok(MainLemmaOutcome::NoWitness { candidates }),
        }
    }
}
