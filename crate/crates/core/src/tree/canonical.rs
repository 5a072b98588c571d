//! Trees with arbitrary node labels, relabeled onto canonical paths.

use super::{FoliageTree, RisePromise, Separation, SonFamily};
use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::space::Space;
use crate::symsets::{ClopenSet, Constants};
use std::fmt::Debug;
use std::sync::Arc;

/// A foliage tree whose nodes carry labels of its own choosing; son `n` of
/// a node is the `n`-th member of its indexed son family.
pub trait LabeledTree: Send + Sync {
    type Label: Clone + Debug + Send + Sync;

    fn name(&self) -> String;
    fn space(&self) -> Space;
    fn root(&self) -> Self::Label;

    fn root_leaf(&self) -> ClopenSet {
        ClopenSet::minus(ClopenSet::full(&self.space()), self.removed_points())
    }

    fn removed_points(&self) -> Vec<crate::point::Point> {
        Vec::new()
    }

    fn family(&self, l: &Self::Label) -> Result<Arc<dyn SonFamily>>;
    fn son(&self, l: &Self::Label, n: u64) -> Result<Self::Label>;
    fn separation(&self, l: &Self::Label) -> Result<Separation>;
    fn separation_bound(&self, d: usize) -> Separation;

    fn rise_promise(&self) -> RisePromise {
        RisePromise::None
    }

    fn uniform_hint(&self, _c: &Constants, _depth: usize) -> Result<Option<u64>> {
        Ok(None)
    }
}

/// A labeled tree seen on the canonical skeleton.
pub struct Canonical<T> {
    pub inner: T,
}

impl<T: LabeledTree> Canonical<T> {
    pub fn new(inner: T) -> Canonical<T> {
        Canonical { inner }
    }

    /// The label of the node at canonical path `v`.
    pub fn label(&self, v: &NodePath) -> Result<T::Label> {
        let mut l = self.inner.root();
        for &n in v.entries() {
            l = self.inner.son(&l, n)?;
        }
        Ok(l)
    }
}

impl<T: LabeledTree> FoliageTree for Canonical<T> {
    fn name(&self) -> String {
        self.inner.name()
    }
    fn space(&self) -> Space {
        self.inner.space()
    }
    fn root_leaf(&self) -> ClopenSet {
        self.inner.root_leaf()
    }
    fn removed_points(&self) -> Vec<crate::point::Point> {
        self.inner.removed_points()
    }
    fn sons(&self, v: &NodePath) -> Result<Arc<dyn SonFamily>> {
        self.inner.family(&self.label(v)?)
    }
    fn separation(&self, v: &NodePath) -> Result<Separation> {
        self.inner.separation(&self.label(v)?)
    }
    fn separation_bound(&self, d: usize) -> Separation {
        self.inner.separation_bound(d)
    }
    fn rise_promise(&self) -> RisePromise {
        self.inner.rise_promise()
    }
    fn uniform_hint(&self, c: &Constants, depth: usize) -> Result<Option<u64>> {
        self.inner.uniform_hint(c, depth)
    }
}

/// A canonical tree viewed as a labeled tree whose labels are its paths.
pub struct PathLabels<F>(pub F);

impl<F: FoliageTree> LabeledTree for PathLabels<F> {
    type Label = NodePath;

    fn name(&self) -> String {
        self.0.name()
    }
    fn space(&self) -> Space {
        self.0.space()
    }
    fn root(&self) -> NodePath {
        NodePath::root()
    }
    fn root_leaf(&self) -> ClopenSet {
        self.0.root_leaf()
    }
    fn removed_points(&self) -> Vec<crate::point::Point> {
        self.0.removed_points()
    }
    fn family(&self, l: &NodePath) -> Result<Arc<dyn SonFamily>> {
        self.0.sons(l)
    }
    fn son(&self, l: &NodePath, n: u64) -> Result<NodePath> {
        Ok(l.child(n))
    }
    fn separation(&self, l: &NodePath) -> Result<Separation> {
        self.0.separation(l)
    }
    fn separation_bound(&self, d: usize) -> Separation {
        self.0.separation_bound(d)
    }
    fn rise_promise(&self) -> RisePromise {
        self.0.rise_promise()
    }
    fn uniform_hint(&self, c: &Constants, depth: usize) -> Result<Option<u64>> {
        self.0.uniform_hint(c, depth)
    }
}

/// Sons per node visited when checking ω-branching.
const BRANCH_SAMPLE: u64 = 2;

/// Relabels `t` canonically after checking, on the nodes of height below `d`
/// with entries below a small bound, that every son family is infinite.
pub fn canonicalize<T: LabeledTree>(t: T, d: usize) -> Result<Canonical<T>> {
    let mut frontier = vec![(NodePath::root(), t.root())];
    for _ in 0..d {
        let mut next = Vec::new();
        for (v, l) in frontier {
            let fam = t.family(&l)?;
            if let Some(len) = fam.finite_len() {
                return Err(Error::NotOmegaBranching(format!("{v} has {len} sons")));
            }
            for n in 0..BRANCH_SAMPLE {
                next.push((v.child(n), t.son(&l, n)?));
            }
        }
        frontier = next;
    }
    Ok(Canonical::new(t))
}
