//! Exhaustive checks of the small-tree exponent bounds.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bijection::{enumerate_trees, ColoredTernaryTree, TreeNode};
use crate::error::{Error, Result};
use crate::transfer::root_vector;

use super::{max_exponent_vector, psi};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SmallPropClass {
    #[serde(rename = "or2")]
    Or2,
    #[serde(rename = "or3")]
    Or3,
    #[serde(rename = "or4")]
    Or4,
    /// Five nodes, root with two non-leaf children.
    #[serde(rename = "or5")]
    Or5,
    /// Root with three children of sizes in `1..=3`, one of them of size 2.
    #[serde(rename = "3chior5-z2")]
    ThreeChildZ2,
    /// Root with three children of sizes in `1..=3`, one of them of size 3.
    #[serde(rename = "3chior5-z3")]
    ThreeChildZ3,
}

impl SmallPropClass {
    pub const ALL: [SmallPropClass; 6] = [
        SmallPropClass::Or2,
        SmallPropClass::Or3,
        SmallPropClass::Or4,
        SmallPropClass::Or5,
        SmallPropClass::ThreeChildZ2,
        SmallPropClass::ThreeChildZ3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SmallPropClass::Or2 => "or2",
            SmallPropClass::Or3 => "or3",
            SmallPropClass::Or4 => "or4",
            SmallPropClass::Or5 => "or5",
            SmallPropClass::ThreeChildZ2 => "3chior5-z2",
            SmallPropClass::ThreeChildZ3 => "3chior5-z3",
        }
    }

    /// Lower bound on `psi` of the maximal certificate.
    pub fn bound(self) -> u64 {
        match self {
            SmallPropClass::Or2 => 2,
            SmallPropClass::Or3 => 4,
            SmallPropClass::Or4 => 6,
            SmallPropClass::Or5 => 8,
            SmallPropClass::ThreeChildZ2 => 8,
            SmallPropClass::ThreeChildZ3 => 10,
        }
    }

    /// `or2` and `or3` state equality rather than a lower bound.
    pub fn is_exact(self) -> bool {
        matches!(self, SmallPropClass::Or2 | SmallPropClass::Or3)
    }

    /// Every tree in the class.
    pub fn members(self) -> Vec<ColoredTernaryTree> {
        match self {
            SmallPropClass::Or2 => enumerate_trees(2).collect(),
            SmallPropClass::Or3 => enumerate_trees(3).collect(),
            SmallPropClass::Or4 => enumerate_trees(4).collect(),
            SmallPropClass::Or5 => enumerate_trees(5)
                .filter(|t| {
                    let kids = &t.root().children;
                    kids.len() == 2 && kids.iter().all(|c| !c.children.is_empty())
                })
                .collect(),
            SmallPropClass::ThreeChildZ2 => three_child_trees(2),
            SmallPropClass::ThreeChildZ3 => three_child_trees(3),
        }
    }
}

impl fmt::Display for SmallPropClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SmallPropClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SmallPropClass::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Contract(format!("unknown size class {s:?}")))
    }
}

/// Root with children labeled 1, 2, 3, all of size at most 3, and at least
/// one of size `required`.
fn three_child_trees(required: usize) -> Vec<ColoredTernaryTree> {
    let small: Vec<Vec<TreeNode>> = (0..=3)
        .map(|n| enumerate_trees(n).map(|t| t.root().clone()).collect())
        .collect();
    let mut out = Vec::new();
    for a in 1..=3 {
        for b in 1..=3 {
            for c in 1..=3 {
                if ![a, b, c].contains(&required) {
                    continue;
                }
                for x in &small[a] {
                    for y in &small[b] {
                        for z in &small[c] {
                            let kids = [x, y, z]
                                .into_iter()
                                .zip(1..)
                                .map(|(t, label)| TreeNode::new(Some(label), t.children.clone()))
                                .collect();
                            out.push(
                                ColoredTernaryTree::new(TreeNode::new(None, kids))
                                    .expect("well-formed by construction"),
                            );
                        }
                    }
                }
            }
        }
    }
    out
}

/// One line of a verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub instance: ColoredTernaryTree,
    pub psi: u64,
    pub bound: u64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SmallPropReport {
    pub class: SmallPropClass,
    pub records: Vec<VerificationRecord>,
}

impl SmallPropReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerificationRecord> {
        self.records.iter().filter(|r| !r.pass)
    }

    /// One JSON object per line.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("records serialize"));
            out.push('\n');
        }
        out
    }
}

pub fn verify_small_props(class: SmallPropClass) -> SmallPropReport {
    let bound = class.bound();
    let records = class
        .members()
        .into_iter()
        .map(|t| {
            let e = max_exponent_vector(&root_vector(&t))
                .expect("trees with a node have positive root vectors");
            let value = psi(&e);
            let pass = if class.is_exact() {
                value == bound
            } else {
                value >= bound
            };
            VerificationRecord {
                instance: t,
                psi: value,
                bound,
                pass,
            }
        })
        .collect();
    SmallPropReport { class, records }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_sizes() {
        assert_eq!(SmallPropClass::Or2.members().len(), 3);
        assert_eq!(SmallPropClass::Or3.members().len(), 12);
        assert_eq!(SmallPropClass::Or4.members().len(), 55);
        // two of three labels, each child one of the 3 trees of size 2
        assert_eq!(SmallPropClass::Or5.members().len(), 3 * 3 * 3);
        // sizes from {1,2,3}: 16^3 total, minus those avoiding size 2 (13^3)
        assert_eq!(
            SmallPropClass::ThreeChildZ2.members().len(),
            16 * 16 * 16 - 13 * 13 * 13
        );
        assert_eq!(
            SmallPropClass::ThreeChildZ3.members().len(),
            16 * 16 * 16 - 4 * 4 * 4
        );
    }

    #[test]
    fn names_round_trip() {
        for c in SmallPropClass::ALL {
            assert_eq!(c.name().parse::<SmallPropClass>().unwrap(), c);
            assert_eq!(
                serde_json::to_string(&c).unwrap(),
                format!("\"{}\"", c.name())
            );
        }
        assert!("or6".parse::<SmallPropClass>().is_err());
    }

    #[test]
    fn or2_and_or4() {
        let r = verify_small_props(SmallPropClass::Or2);
        assert!(r.all_pass());
        assert!(r.records.iter().all(|x| x.psi == 2));
        assert!(verify_small_props(SmallPropClass::Or4).all_pass());
    }

    #[test]
    fn report_lines() {
        let r = verify_small_props(SmallPropClass::Or2);
        let text = r.to_jsonl();
        assert_eq!(text.lines().count(), 3);
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["psi"], 2);
        assert_eq!(first["bound"], 2);
        assert_eq!(first["pass"], true);
        assert!(first["instance"]["children"].is_array());
    }
}
