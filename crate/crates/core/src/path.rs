//! Nodes of the canonical skeleton: finite sequences of naturals.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodePath(pub Vec<u64>);

impl NodePath {
    pub fn root() -> Self {
        NodePath(Vec::new())
    }

    pub fn new(entries: impl Into<Vec<u64>>) -> Self {
        NodePath(entries.into())
    }

    pub fn height(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn child(&self, n: u64) -> Self {
        let mut v = self.0.clone();
        v.push(n);
        NodePath(v)
    }

    pub fn parent(&self) -> Option<(NodePath, u64)> {
        let (last, init) = self.0.split_last()?;
        Some((NodePath(init.to_vec()), *last))
    }

    pub fn truncate(&self, len: usize) -> Self {
        NodePath(self.0[..len.min(self.0.len())].to_vec())
    }

    /// `self ⊑ other`.
    pub fn is_prefix_of(&self, other: &NodePath) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// Strict skeleton order: `self < other`.
    pub fn is_below(&self, other: &NodePath) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    pub fn comparable(&self, other: &NodePath) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    pub fn concat(&self, tail: &[u64]) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(tail);
        NodePath(v)
    }

    pub fn max_entry(&self) -> Option<u64> {
        self.0.iter().copied().max()
    }
}

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ">")
    }
}

impl From<Vec<u64>> for NodePath {
    fn from(v: Vec<u64>) -> Self {
        NodePath(v)
    }
}

impl From<&[u64]> for NodePath {
    fn from(v: &[u64]) -> Self {
        NodePath(v.to_vec())
    }
}
