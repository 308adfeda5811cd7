//! Remainders: pendant leaves and pendant edges hanging next to a large
//! sibling subtree.
//!
//! Node ids are preorder positions in [`TreeArena`].

use serde::{Deserialize, Serialize};

use crate::bijection::{ColoredTernaryTree, TreeArena};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RemainderReport {
    /// `{v}` (type I) or `{v, w}` (type II), leaf first.
    pub remainders: Vec<Vec<usize>>,
    /// Generator of each remainder, aligned with `remainders`.
    pub generators: Vec<usize>,
}

impl RemainderReport {
    pub fn is_empty(&self) -> bool {
        self.remainders.is_empty()
    }

    pub fn len(&self) -> usize {
        self.remainders.len()
    }

    /// Every node that belongs to some remainder.
    pub fn covered(&self, tree_size: usize) -> Vec<bool> {
        let mut flags = vec![false; tree_size];
        for v in self.remainders.iter().flatten() {
            flags[*v] = true;
        }
        flags
    }
}

pub fn find_remainders(tree: &ColoredTernaryTree) -> RemainderReport {
    find_in_arena(&TreeArena::new(tree))
}

pub(crate) fn find_in_arena(arena: &TreeArena) -> RemainderReport {
    let mut report = RemainderReport::default();
    let big_siblings = |father: usize, except: usize| {
        arena
            .children(father)
            .iter()
            .filter(|&&u| u != except)
            .all(|&u| arena.subtree_size(u) >= 3)
    };
    for v in 1..arena.len() {
        if !arena.is_leaf(v) {
            continue;
        }
        let w = arena.parent(v).expect("non-root node has a father");
        if arena.children(w).len() >= 2 {
            if big_siblings(w, v) {
                report.remainders.push(vec![v]);
                report.generators.push(w);
            }
            continue;
        }
        let Some(y) = arena.parent(w) else { continue };
        if arena.children(y).len() == 2 && big_siblings(y, w) {
            report.remainders.push(vec![v, w]);
            report.generators.push(y);
        }
    }
    report
}

/// The tree with every remainder removed.
pub fn strip_remainders(tree: &ColoredTernaryTree) -> ColoredTernaryTree {
    let arena = TreeArena::new(tree);
    let report = find_in_arena(&arena);
    if report.is_empty() {
        return tree.clone();
    }
    arena.without(&report.covered(arena.len()))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::bijection::{enumerate_trees, TreeNode};

    fn tree(children: Vec<TreeNode>) -> ColoredTernaryTree {
        ColoredTernaryTree::new(TreeNode::new(None, children)).unwrap()
    }

    fn node(label: u8, children: Vec<TreeNode>) -> TreeNode {
        TreeNode::new(Some(label), children)
    }

    fn three_chain(label: u8) -> TreeNode {
        node(label, vec![node(1, vec![TreeNode::leaf(1)])])
    }

    #[test]
    fn single_node_and_edge_are_free() {
        assert!(find_remainders(&ColoredTernaryTree::single_node()).is_empty());
        for t in enumerate_trees(2) {
            assert!(find_remainders(&t).is_empty());
        }
    }

    #[test]
    fn pendant_leaf() {
        // root w, leaf v with label 1, 3-node chain with label 2
        let t = tree(vec![TreeNode::leaf(1), three_chain(2)]);
        let r = find_remainders(&t);
        assert_eq!(r.remainders, vec![vec![1]]);
        assert_eq!(r.generators, vec![0]);
        let stripped = strip_remainders(&t);
        assert_eq!(stripped.size(), 4);
        assert!(find_remainders(&stripped).is_empty());
        assert_eq!(stripped, tree(vec![three_chain(2)]));
    }

    #[test]
    fn pendant_edge() {
        // root y, chain w-v with label 1, 3-node chain with label 3
        let t = tree(vec![node(1, vec![TreeNode::leaf(2)]), three_chain(3)]);
        let r = find_remainders(&t);
        assert_eq!(r.remainders, vec![vec![2, 1]]);
        assert_eq!(r.generators, vec![0]);
        assert_eq!(strip_remainders(&t).size(), 4);
    }

    #[test]
    fn small_sibling_blocks_remainder() {
        let t = tree(vec![TreeNode::leaf(1), node(2, vec![TreeNode::leaf(1)])]);
        assert!(find_remainders(&t).is_empty());
        // a third child makes the pendant edge case inapplicable
        let t = tree(vec![
            node(1, vec![TreeNode::leaf(2)]),
            three_chain(2),
            three_chain(3),
        ]);
        assert!(find_remainders(&t).is_empty());
    }

    #[test]
    fn generators_distinct_up_to_seven() {
        for n in 1..=7 {
            for t in enumerate_trees(n) {
                let r = find_remainders(&t);
                assert_eq!(r.remainders.len(), r.generators.len());
                let distinct: BTreeSet<_> = r.generators.iter().collect();
                assert_eq!(distinct.len(), r.generators.len(), "{}", t.to_json());
                let s = strip_remainders(&t);
                assert!(find_remainders(&s).is_empty(), "{}", t.to_json());
                assert!(3 * s.size() >= t.size());
            }
        }
    }
}
