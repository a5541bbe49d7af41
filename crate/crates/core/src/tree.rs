//! Process-tree term algebra.
//!
//! A process tree is either an activity leaf, a silent leaf (`tau`) or an
//! operator node with an ordered list of children. Trees are plain values:
//! cloning is deep, equality is structural, and the derived `Ord` is the fixed
//! total order used by [`canonicalize`] (activity leaves before `tau`, `tau`
//! before operator nodes, then by operator kind, then children
//! lexicographically).

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::TreeError;

/// Keyword reserved for the silent leaf.
pub const TAU_KEYWORD: &str = "tau";

/// Name of a visible process step.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Activity(Arc<str>);

impl Activity {
    pub fn new(name: &str) -> Result<Self, TreeError> {
        if Self::is_valid_name(name) {
            Ok(Activity(Arc::from(name)))
        } else {
            Err(TreeError::InvalidActivity(name.to_string()))
        }
    }

    pub fn is_valid_name(name: &str) -> bool {
        !name.is_empty()
            && name != TAU_KEYWORD
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Activity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Serialize for Activity {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Activity {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        Activity::new(&name).map_err(serde::de::Error::custom)
    }
}

/// The six process-tree operators.
///
/// Variant order is part of the canonical tree order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Operator {
    /// Exclusive choice.
    Xor,
    /// Sequential composition.
    Seq,
    /// Interleaved composition: every child runs, without overlap.
    Interleaved,
    /// Concurrent composition: every child runs, possibly overlapping.
    Concurrent,
    /// Inclusive choice: a non-empty subset of children runs concurrently.
    Or,
    /// Body followed by optional repetitions of (redo, body).
    Loop,
}

impl Operator {
    pub const ALL: [Operator; 6] = [
        Operator::Xor,
        Operator::Seq,
        Operator::Interleaved,
        Operator::Concurrent,
        Operator::Or,
        Operator::Loop,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            Operator::Xor => "xor",
            Operator::Seq => "seq",
            Operator::Interleaved => "int",
            Operator::Concurrent => "and",
            Operator::Or => "or",
            Operator::Loop => "loop",
        }
    }

    pub fn glyph(self) -> &'static str {
        match self {
            Operator::Xor => "×",
            Operator::Seq => "→",
            Operator::Interleaved => "↔",
            Operator::Concurrent => "∧",
            Operator::Or => "∨",
            Operator::Loop => "⟲",
        }
    }

    pub fn from_keyword(word: &str) -> Option<Operator> {
        Operator::ALL.into_iter().find(|op| op.keyword() == word)
    }

    pub fn min_children(self) -> usize {
        match self {
            Operator::Loop => 2,
            _ => 1,
        }
    }

    /// Whether the language is invariant under permuting all children.
    pub fn is_commutative(self) -> bool {
        matches!(
            self,
            Operator::Xor | Operator::Interleaved | Operator::Concurrent | Operator::Or
        )
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ProcessTree {
    Activity(Activity),
    Tau,
    Node(Operator, Vec<ProcessTree>),
}

impl ProcessTree {
    /// Activity leaf; panics on an invalid name. Meant for literals in code.
    pub fn leaf(name: &str) -> ProcessTree {
        ProcessTree::Activity(Activity::new(name).expect("valid activity name"))
    }

    pub fn node(op: Operator, children: Vec<ProcessTree>) -> ProcessTree {
        ProcessTree::Node(op, children)
    }

    pub fn is_tau(&self) -> bool {
        matches!(self, ProcessTree::Tau)
    }

    pub fn operator(&self) -> Option<Operator> {
        match self {
            ProcessTree::Node(op, _) => Some(*op),
            _ => None,
        }
    }

    pub fn is_op(&self, op: Operator) -> bool {
        self.operator() == Some(op)
    }

    pub fn children(&self) -> &[ProcessTree] {
        match self {
            ProcessTree::Node(_, children) => children,
            _ => &[],
        }
    }

    pub fn get(&self, path: &TreePath) -> Option<&ProcessTree> {
        let mut current = self;
        for &index in path.indices() {
            current = current.children().get(index)?;
        }
        Some(current)
    }

    pub fn get_mut(&mut self, path: &TreePath) -> Option<&mut ProcessTree> {
        let mut current = self;
        for &index in path.indices() {
            current = match current {
                ProcessTree::Node(_, children) => children.get_mut(index)?,
                _ => return None,
            };
        }
        Some(current)
    }

    /// Returns a copy of `self` with the subtree at `path` replaced.
    pub fn replaced(&self, path: &TreePath, replacement: ProcessTree) -> Option<ProcessTree> {
        let mut tree = self.clone();
        *tree.get_mut(path)? = replacement;
        Some(tree)
    }

    /// All subtree positions in depth-first, left-to-right pre-order.
    pub fn positions(&self) -> Vec<TreePath> {
        fn walk(tree: &ProcessTree, path: &mut Vec<usize>, out: &mut Vec<TreePath>) {
            out.push(TreePath(path.clone()));
            for (i, child) in tree.children().iter().enumerate() {
                path.push(i);
                walk(child, path, out);
                path.pop();
            }
        }
        let mut out = Vec::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    /// Pre-order iterator over all subtrees, the root included.
    pub fn subtrees(&self) -> Subtrees<'_> {
        Subtrees { stack: vec![self] }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(ProcessTree::depth).max().unwrap_or(0)
    }
}

impl fmt::Display for ProcessTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_tree(self))
    }
}

pub struct Subtrees<'a> {
    stack: Vec<&'a ProcessTree>,
}

impl<'a> Iterator for Subtrees<'a> {
    type Item = &'a ProcessTree;

    fn next(&mut self) -> Option<Self::Item> {
        let tree = self.stack.pop()?;
        self.stack.extend(tree.children().iter().rev());
        Some(tree)
    }
}

/// Child-index path from the root. The empty path addresses the root.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TreePath(Vec<usize>);

impl TreePath {
    pub fn root() -> Self {
        TreePath(Vec::new())
    }

    pub fn new(indices: Vec<usize>) -> Self {
        TreePath(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, index: usize) -> TreePath {
        let mut indices = self.0.clone();
        indices.push(index);
        TreePath(indices)
    }

    pub fn parent(&self) -> Option<TreePath> {
        let (_, rest) = self.0.split_last()?;
        Some(TreePath(rest.to_vec()))
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }
}

/// Slash-separated form, e.g. `0/2`; the root renders as the empty string.
impl fmt::Display for TreePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, index) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{index}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for TreePath {
    type Err = TreeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Ok(TreePath::root());
        }
        s.split('/')
            .map(|part| {
                part.parse::<usize>()
                    .map_err(|_| TreeError::InvalidPath(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(TreePath)
    }
}

impl Serialize for TreePath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TreePath {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: TreePath,
    pub message: String,
}

/// Checks node arities and activity names. An empty list means the tree is valid.
pub fn validate(tree: &ProcessTree) -> Vec<Violation> {
    let mut violations = Vec::new();
    for path in tree.positions() {
        match tree.get(&path).expect("position from positions()") {
            ProcessTree::Activity(a) if !Activity::is_valid_name(a.name()) => {
                violations.push(Violation {
                    path,
                    message: format!("invalid activity name {:?}", a.name()),
                });
            }
            ProcessTree::Node(op, children) if children.len() < op.min_children() => {
                violations.push(Violation {
                    path,
                    message: format!(
                        "{op} node needs at least {} child(ren), has {}",
                        op.min_children(),
                        children.len()
                    ),
                });
            }
            _ => {}
        }
    }
    violations
}

/// Number of leaves and operator nodes.
pub fn size(tree: &ProcessTree) -> usize {
    tree.subtrees().count()
}

/// Activities labelling the non-silent leaves.
pub fn alphabet(tree: &ProcessTree) -> BTreeSet<Activity> {
    tree.subtrees()
        .filter_map(|t| match t {
            ProcessTree::Activity(a) => Some(a.clone()),
            _ => None,
        })
        .collect()
}

/// Sorts order-insensitive children bottom-up.
///
/// Children of xor, and, or and int nodes are sorted, as are the redo children
/// of loops. Sequence children and loop bodies keep their position.
pub fn canonicalize(tree: &ProcessTree) -> ProcessTree {
    match tree {
        ProcessTree::Node(op, children) => {
            let mut children: Vec<ProcessTree> = children.iter().map(canonicalize).collect();
            if op.is_commutative() {
                children.sort();
            } else if *op == Operator::Loop && children.len() > 1 {
                children[1..].sort();
            }
            ProcessTree::Node(*op, children)
        }
        leaf => leaf.clone(),
    }
}

/// Equality modulo the order of order-insensitive children.
pub fn isomorphic(a: &ProcessTree, b: &ProcessTree) -> bool {
    canonicalize(a) == canonicalize(b)
}
