//! Colored rooted ternary trees and the labeling procedure that maps rooted
//! stack triangulations onto them.
//!
//! Node `u_i` (the vertex inserted at step `i`) becomes a child of `u_j`
//! with label `k` exactly when step `i` grew inside the face created by step
//! `j` in position `k`. The first inserted vertex is the root.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::triangulation::{FaceRecord, StackTriangulation, VertexId};

/// Child position / color, one of `1, 2, 3`.
pub type Label = u8;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TreeNode {
    pub label: Option<Label>,
    pub children: Vec<TreeNode>,
}

impl TreeNode {
    pub fn leaf(label: Label) -> Self {
        TreeNode {
            label: Some(label),
            children: Vec::new(),
        }
    }

    pub fn new(label: Option<Label>, children: Vec<TreeNode>) -> Self {
        TreeNode { label, children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(TreeNode::size).sum::<usize>()
    }

    pub fn child(&self, label: Label) -> Option<&TreeNode> {
        self.children.iter().find(|c| c.label == Some(label))
    }

    pub fn child_labels(&self) -> Vec<Label> {
        self.children.iter().filter_map(|c| c.label).collect()
    }

    fn canonicalize(&mut self) -> Result<()> {
        self.children.sort_by_key(|c| c.label);
        for (i, child) in self.children.iter().enumerate() {
            match child.label {
                Some(1..=3) => {}
                other => {
                    return Err(Error::InvalidTree(format!(
                        "non-root label must be 1, 2 or 3, got {other:?}"
                    )))
                }
            }
            if i > 0 && self.children[i - 1].label == child.label {
                return Err(Error::InvalidTree(format!(
                    "two siblings share label {}",
                    child.label.unwrap()
                )));
            }
        }
        for child in &mut self.children {
            child.canonicalize()?;
        }
        Ok(())
    }
}

/// A validated colored rooted ternary tree; children are kept in ascending
/// label order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "TreeNode", into = "TreeNode")]
pub struct ColoredTernaryTree {
    root: TreeNode,
    size: usize,
}

impl TryFrom<TreeNode> for ColoredTernaryTree {
    type Error = Error;

    fn try_from(root: TreeNode) -> Result<Self> {
        ColoredTernaryTree::new(root)
    }
}

impl From<ColoredTernaryTree> for TreeNode {
    fn from(tree: ColoredTernaryTree) -> Self {
        tree.root
    }
}

impl ColoredTernaryTree {
    pub fn new(mut root: TreeNode) -> Result<Self> {
        if root.label.is_some() {
            return Err(Error::InvalidTree("the root carries no label".into()));
        }
        root.canonicalize()?;
        let size = root.size();
        Ok(ColoredTernaryTree { root, size })
    }

    /// Relabels `node` as a root and wraps it; `node`'s subtree must already
    /// be valid.
    pub fn from_subtree(node: &TreeNode) -> Self {
        let mut root = node.clone();
        root.label = None;
        let size = root.size();
        ColoredTernaryTree { root, size }
    }

    pub fn single_node() -> Self {
        ColoredTernaryTree {
            root: TreeNode::default(),
            size: 1,
        }
    }

    /// A new root whose only child is this tree's root, labeled `label`.
    pub fn graft_under(&self, label: Label) -> Result<Self> {
        let mut child = self.root.clone();
        child.label = Some(label);
        ColoredTernaryTree::new(TreeNode::new(None, vec![child]))
    }

    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(Error::parse)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serializes")
    }

    /// Graphviz rendering in preorder numbering, labels on the edges.
    pub fn to_dot(&self) -> String {
        let arena = TreeArena::new(self);
        let mut out = String::from("graph tree {\n");
        for v in 0..arena.len() {
            writeln!(out, "  {v};").unwrap();
        }
        for v in 1..arena.len() {
            let p = arena.parent(v).unwrap();
            writeln!(out, "  {p} -- {v} [label=\"{}\"];", arena.label(v).unwrap()).unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Flat preorder view of a tree, for algorithms that address nodes by index.
#[derive(Clone, Debug)]
pub struct TreeArena {
    labels: Vec<Option<Label>>,
    parents: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    sizes: Vec<usize>,
}

impl TreeArena {
    pub fn new(tree: &ColoredTernaryTree) -> Self {
        let mut arena = TreeArena {
            labels: Vec::with_capacity(tree.size()),
            parents: Vec::with_capacity(tree.size()),
            children: Vec::with_capacity(tree.size()),
            sizes: Vec::with_capacity(tree.size()),
        };
        let mut stack = vec![(tree.root(), None)];
        while let Some((node, parent)) = stack.pop() {
            let id = arena.labels.len();
            arena.labels.push(node.label);
            arena.parents.push(parent);
            arena.children.push(Vec::with_capacity(node.children.len()));
            arena.sizes.push(1);
            if let Some(p) = parent {
                arena.children[p].push(id);
            }
            for child in node.children.iter().rev() {
                stack.push((child, Some(id)));
            }
        }
        for v in (1..arena.len()).rev() {
            let p = arena.parents[v].unwrap();
            arena.sizes[p] += arena.sizes[v];
        }
        arena
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> Option<Label> {
        self.labels[v]
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// `|T_v|`.
    pub fn subtree_size(&self, v: usize) -> usize {
        self.sizes[v]
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.children[v].is_empty()
    }

    /// `T_v` as a standalone tree.
    pub fn subtree(&self, v: usize) -> ColoredTernaryTree {
        let root = self.build(v, &|_| false);
        ColoredTernaryTree::from_subtree(&root)
    }

    /// The tree with the nodes flagged in `removed` deleted. Every removed
    /// node must have all its descendants removed as well; the root must stay.
    pub fn without(&self, removed: &[bool]) -> ColoredTernaryTree {
        assert!(!removed[0], "cannot remove the root");
        let root = self.build(0, &|v| removed[v]);
        ColoredTernaryTree::from_subtree(&root)
    }

    fn build(&self, v: usize, skip: &dyn Fn(usize) -> bool) -> TreeNode {
        TreeNode {
            label: self.labels[v],
            children: self.children[v]
                .iter()
                .filter(|&&c| !skip(c))
                .map(|&c| self.build(c, skip))
                .collect(),
        }
    }
}

/// For each growing step, the label path from the root to its tree node.
pub type NodePaths = Vec<Vec<Label>>;

/// The colored ternary tree of a rooted stack triangulation.
pub fn to_tree(tri: &StackTriangulation) -> Result<ColoredTernaryTree> {
    to_tree_with_paths(tri).map(|(t, _)| t)
}

/// Like [`to_tree`], also reporting where each inserted vertex landed.
pub fn to_tree_with_paths(tri: &StackTriangulation) -> Result<(ColoredTernaryTree, NodePaths)> {
    let n = tri.steps();
    if n == 0 {
        return Err(Error::NoTree);
    }
    // owner of each inner face: (creating step, position)
    let mut owners: Vec<Option<(usize, Label)>> = vec![None];
    let mut parent: Vec<Option<(usize, Label)>> = Vec::with_capacity(n);
    for (step, &index) in tri.history().choices().iter().enumerate() {
        let owner = owners.remove(index);
        if step > 0 && owner.is_none() {
            return Err(Error::Contract(
                "only the first step grows in the starting face".into(),
            ));
        }
        parent.push(owner);
        owners.extend((1..=3).map(|k| Some((step, k))));
    }

    let mut kids: Vec<BTreeMap<Label, usize>> = vec![BTreeMap::new(); n];
    let mut paths: NodePaths = vec![Vec::new(); n];
    for step in 1..n {
        let (p, k) = parent[step].unwrap();
        kids[p].insert(k, step);
        let mut path = paths[p].clone();
        path.push(k);
        paths[step] = path;
    }

    fn build(v: usize, label: Option<Label>, kids: &[BTreeMap<Label, usize>]) -> TreeNode {
        TreeNode {
            label,
            children: kids[v]
                .iter()
                .map(|(&k, &c)| build(c, Some(k), kids))
                .collect(),
        }
    }
    let root = build(0, None, &kids);
    Ok((ColoredTernaryTree { size: n, root }, paths))
}

/// Rebuilds a triangulation from a tree by depth-first, label-ascending
/// insertion of each node into the face `f_parent(label)`.
pub fn from_tree(tree: &ColoredTernaryTree) -> StackTriangulation {
    from_tree_with_paths(tree).0
}

pub fn from_tree_with_paths(tree: &ColoredTernaryTree) -> (StackTriangulation, NodePaths) {
    let mut tri = StackTriangulation::new_root_triangle();
    let mut paths = Vec::with_capacity(tree.size());
    let mut stack: Vec<(&TreeNode, FaceRecord, Vec<Label>)> =
        vec![(tree.root(), FaceRecord::new(0, 1, 2), Vec::new())];
    while let Some((node, face, path)) = stack.pop() {
        let index = tri
            .inner_faces()
            .iter()
            .position(|f| *f == face)
            .expect("target face exists");
        tri.grow_in_place(index).expect("index in range");
        let created: [FaceRecord; 3] = tri.inner_faces()[tri.inner_faces().len() - 3..]
            .try_into()
            .unwrap();
        for child in node.children.iter().rev() {
            let k = child.label.expect("validated tree");
            let mut child_path = path.clone();
            child_path.push(k);
            stack.push((child, created[k as usize - 1], child_path));
        }
        paths.push(path);
    }
    (tri, paths)
}

/// Whether two triangulations with the same tree image coincide once their
/// inserted vertices are matched through the tree.
pub fn same_rooted_triangulation(x: &StackTriangulation, y: &StackTriangulation) -> Result<bool> {
    if x.vertex_count() != y.vertex_count() {
        return Ok(false);
    }
    if x.steps() == 0 {
        return Ok(true);
    }
    let (tx, px) = to_tree_with_paths(x)?;
    let (ty, py) = to_tree_with_paths(y)?;
    if tx != ty {
        return Ok(false);
    }
    let by_path: BTreeMap<&[Label], usize> = py
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let map = |v: VertexId| -> VertexId {
        if v.0 < 3 {
            v
        } else {
            VertexId(3 + by_path[px[v.0 - 3].as_slice()])
        }
    };
    let mut mapped: Vec<FaceRecord> = x
        .inner_faces()
        .iter()
        .map(|f| FaceRecord {
            a: map(f.a),
            b: map(f.b),
            c: map(f.c),
        })
        .collect();
    let mut target = y.inner_faces().to_vec();
    mapped.sort_by_key(|f| f.vertices());
    target.sort_by_key(|f| f.vertices());
    Ok(mapped == target)
}

const LABEL_SETS: [&[Label]; 8] = [&[], &[1], &[2], &[3], &[1, 2], &[1, 3], &[2, 3], &[1, 2, 3]];

/// Every colored rooted ternary tree with `n` nodes, each exactly once.
pub fn enumerate_trees(n: usize) -> std::vec::IntoIter<ColoredTernaryTree> {
    if n == 0 {
        return Vec::new().into_iter();
    }
    let by_size = shapes_up_to(n);
    by_size[n]
        .iter()
        .map(|root| ColoredTernaryTree {
            root: root.clone(),
            size: n,
        })
        .collect::<Vec<_>>()
        .into_iter()
}

/// Unlabeled-root node lists indexed by size, `0..=max`.
fn shapes_up_to(max: usize) -> Vec<Vec<TreeNode>> {
    let mut by_size: Vec<Vec<TreeNode>> = vec![Vec::new(), vec![TreeNode::default()]];
    for size in 2..=max {
        let mut out = Vec::new();
        for labels in &LABEL_SETS[1..] {
            for parts in compositions(size - 1, labels.len()) {
                let mut acc: Vec<Vec<TreeNode>> = vec![Vec::new()];
                for (&label, &part) in labels.iter().zip(&parts) {
                    let mut next = Vec::with_capacity(acc.len() * by_size[part].len());
                    for prefix in &acc {
                        for sub in &by_size[part] {
                            let mut kids = prefix.clone();
                            let mut child = sub.clone();
                            child.label = Some(label);
                            kids.push(child);
                            next.push(kids);
                        }
                    }
                    acc = next;
                }
                out.extend(acc.into_iter().map(|children| TreeNode {
                    label: None,
                    children,
                }));
            }
        }
        by_size.push(out);
    }
    by_size.truncate(max + 1);
    by_size
}

/// Ordered ways to write `total` as `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 1..=total.saturating_sub(parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{enumerate_histories, GrowthHistory};
    use std::collections::BTreeSet;

    fn tri(h: &[usize]) -> StackTriangulation {
        StackTriangulation::from_history(&GrowthHistory::new(h.to_vec())).unwrap()
    }

    fn tree(json: &str) -> ColoredTernaryTree {
        ColoredTernaryTree::from_json(json).unwrap()
    }

    #[test]
    fn triangle_has_no_tree() {
        assert!(matches!(to_tree(&tri(&[])), Err(Error::NoTree)));
    }

    #[test]
    fn small_images() {
        assert_eq!(
            to_tree(&tri(&[0])).unwrap(),
            ColoredTernaryTree::single_node()
        );
        let one = |k: Label| {
            ColoredTernaryTree::new(TreeNode::new(None, vec![TreeNode::leaf(k)])).unwrap()
        };
        assert_eq!(to_tree(&tri(&[0, 0])).unwrap(), one(1));
        assert_eq!(to_tree(&tri(&[0, 1])).unwrap(), one(2));
        assert_eq!(to_tree(&tri(&[0, 2])).unwrap(), one(3));
    }

    #[test]
    fn json_format() {
        let t = to_tree(&tri(&[0, 0])).unwrap();
        assert_eq!(
            t.to_json(),
            r#"{"label":null,"children":[{"label":1,"children":[]}]}"#
        );
        // children are sorted on input
        let t = tree(
            r#"{"label":null,"children":[{"label":3,"children":[]},{"label":1,"children":[]}]}"#,
        );
        assert_eq!(t.root().child_labels(), vec![1, 3]);
    }

    #[test]
    fn invalid_trees() {
        let dup =
            r#"{"label":null,"children":[{"label":2,"children":[]},{"label":2,"children":[]}]}"#;
        assert!(ColoredTernaryTree::from_json(dup).is_err());
        let bad = r#"{"label":null,"children":[{"label":4,"children":[]}]}"#;
        assert!(ColoredTernaryTree::from_json(bad).is_err());
        let labeled_root = r#"{"label":1,"children":[]}"#;
        assert!(ColoredTernaryTree::from_json(labeled_root).is_err());
        let unlabeled_child = r#"{"label":null,"children":[{"label":null,"children":[]}]}"#;
        assert!(ColoredTernaryTree::from_json(unlabeled_child).is_err());
    }

    #[test]
    fn tree_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| enumerate_trees(n).count()).collect();
        // ternary tree numbers C(3n, n) / (2n + 1)
        assert_eq!(counts, vec![1, 3, 12, 55, 273, 1428, 7752]);
        for n in 1..=6 {
            let all: Vec<_> = enumerate_trees(n).collect();
            let set: BTreeSet<_> = all.iter().cloned().collect();
            assert_eq!(set.len(), all.len());
            assert!(all.iter().all(|t| t.size() == n));
        }
        let chains = enumerate_trees(3)
            .filter(|t| t.root().children.len() == 1)
            .count();
        assert_eq!(chains, 9);
    }

    #[test]
    fn round_trip_from_tree() {
        for n in 1..=6 {
            for t in enumerate_trees(n) {
                let tri = from_tree(&t);
                assert_eq!(tri.steps(), n);
                assert_eq!(to_tree(&tri).unwrap(), t);
            }
        }
        let single = from_tree(&ColoredTernaryTree::single_node());
        assert_eq!(single.history().choices(), &[0]);
    }

    #[test]
    fn three_children_fill_each_position() {
        let t = tree(
            r#"{"label":null,"children":[{"label":1,"children":[]},{"label":2,"children":[]},{"label":3,"children":[]}]}"#,
        );
        let d = from_tree(&t);
        assert_eq!(d.steps(), 4);
        for j in 1..=3 {
            assert_eq!(d.sub_triangulation(j).unwrap().triangulation.steps(), 1);
        }
    }

    #[test]
    fn image_of_histories_is_every_tree() {
        for n in 1..=6 {
            let image: BTreeSet<_> = enumerate_histories(n)
                .map(|h| to_tree(&StackTriangulation::from_history(&h).unwrap()).unwrap())
                .collect();
            let all: BTreeSet<_> = enumerate_trees(n).collect();
            assert_eq!(image, all);
        }
    }

    #[test]
    fn equal_trees_mean_equal_triangulations() {
        for n in 1..=5 {
            for h in enumerate_histories(n) {
                let d = StackTriangulation::from_history(&h).unwrap();
                let canonical = from_tree(&to_tree(&d).unwrap());
                assert!(same_rooted_triangulation(&d, &canonical).unwrap());
            }
        }
        // different trees are told apart
        assert!(!same_rooted_triangulation(&tri(&[0, 0]), &tri(&[0, 1])).unwrap());
    }

    #[test]
    fn root_children_follow_sub_triangulation_sizes() {
        for n in 1..=6 {
            for h in enumerate_histories(n) {
                let d = StackTriangulation::from_history(&h).unwrap();
                let t = to_tree(&d).unwrap();
                let mut expected = Vec::new();
                for j in 1..=3u8 {
                    let sub = d.sub_triangulation(j as usize).unwrap().triangulation;
                    if sub.vertex_count() >= 4 {
                        expected.push(j);
                        let child = t.root().child(j).unwrap();
                        assert_eq!(
                            ColoredTernaryTree::from_subtree(child),
                            to_tree(&sub).unwrap()
                        );
                    }
                }
                assert_eq!(t.root().child_labels(), expected);
            }
        }
    }

    #[test]
    fn arena_views() {
        let t = tree(
            r#"{"label":null,"children":[{"label":1,"children":[{"label":2,"children":[]}]},{"label":3,"children":[]}]}"#,
        );
        let a = TreeArena::new(&t);
        assert_eq!(a.len(), 4);
        assert_eq!(a.subtree_size(0), 4);
        assert_eq!(a.subtree_size(1), 2);
        assert_eq!(a.children(0), &[1, 3]);
        assert_eq!(a.subtree(1).size(), 2);
        let pruned = a.without(&[false, false, true, true]);
        assert_eq!(
            pruned.to_json(),
            r#"{"label":null,"children":[{"label":1,"children":[]}]}"#
        );
        assert_eq!(t.to_dot().matches("--").count(), 3);
    }
}
