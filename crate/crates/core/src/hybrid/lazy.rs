//! Foliage hybrids of lazy trees with lazily described grafts.
//!
//! Hybrid nodes are labeled by a host node and a path of graft-local
//! indices below it; the empty local path is the host node itself.

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::space::Space;
use crate::symsets::{ClopenSet, Constants};
use crate::tree::{Canonical, LabeledTree, LossFamily, RisePromise, Separation, SonFamily, TreeRef};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A son inside a graft: another local node or a maximal node of the host.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GNode {
    Inner(Vec<u64>),
    Max(NodePath),
}

/// A foliage graft for a lazy host tree, rooted at a host node.
pub trait LazyGraft: Send + Sync {
    fn root(&self) -> &NodePath;

    /// Son `c` of the local node `inner`.
    fn son(&self, inner: &[u64], c: u64) -> Result<GNode>;

    /// Leaves of the sons of `inner`.
    fn family(&self, inner: &[u64]) -> Result<Arc<dyn SonFamily>>;

    /// Leaf of the local node `inner`; the empty path is the root.
    fn leaf(&self, inner: &[u64]) -> Result<ClopenSet>;

    /// `F_root ∖ G_root`.
    fn cut(&self) -> Vec<Point>;

    /// The maximal node at or above the host node `w`, if `w` lies under one.
    fn max_above(&self, w: &NodePath) -> Result<Option<NodePath>>;
}

/// A host tree together with the grafts spliced into it.
pub trait GraftSystem: Send + Sync {
    fn name(&self) -> String;
    fn host(&self) -> &TreeRef;
    fn graft_at(&self, v: &NodePath) -> Result<Option<Arc<dyn LazyGraft>>>;
    /// Union of the cuts of all grafts.
    fn loss(&self) -> Vec<Point>;

    fn separation_bound(&self, d: usize) -> Separation {
        self.host().separation_bound(d)
    }

    fn rise_promise(&self) -> RisePromise {
        RisePromise::None
    }

    fn uniform_hint(&self, _c: &Constants, _depth: usize) -> Result<Option<u64>> {
        Ok(None)
    }
}

/// A hybrid node: host node plus local path, with its height in the hybrid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HLabel {
    pub host: NodePath,
    pub inner: Vec<u64>,
    pub height: usize,
}

impl HLabel {
    pub fn is_host_node(&self) -> bool {
        self.inner.is_empty()
    }
}

impl fmt::Display for HLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inner.is_empty() {
            write!(f, "{}", self.host)
        } else {
            write!(f, "{}+{:?}", self.host, self.inner)
        }
    }
}

pub struct Hybrid<S> {
    pub sys: S,
}

pub type HybridTree<S> = Canonical<Hybrid<S>>;

impl<S: GraftSystem> Hybrid<S> {
    fn graft(&self, l: &HLabel) -> Result<Option<Arc<dyn LazyGraft>>> {
        let g = self.sys.graft_at(&l.host)?;
        if g.is_none() && !l.inner.is_empty() {
            return Err(Error::InconsistentFamily(format!("no graft at {}", l.host)));
        }
        Ok(g)
    }
}

impl<S: GraftSystem> LabeledTree for Hybrid<S> {
    type Label = HLabel;

    fn name(&self) -> String {
        self.sys.name()
    }

    fn space(&self) -> Space {
        self.sys.host().space()
    }

    fn root(&self) -> HLabel {
        HLabel { host: NodePath::root(), inner: Vec::new(), height: 0 }
    }

    fn removed_points(&self) -> Vec<Point> {
        self.sys.loss()
    }

    fn family(&self, l: &HLabel) -> Result<Arc<dyn SonFamily>> {
        let fam = match self.graft(l)? {
            Some(g) => g.family(&l.inner)?,
            None => self.sys.host().sons(&l.host)?,
        };
        Ok(LossFamily::new(fam, self.sys.loss()))
    }

    fn son(&self, l: &HLabel, n: u64) -> Result<HLabel> {
        let height = l.height + 1;
        Ok(match self.graft(l)? {
            Some(g) => match g.son(&l.inner, n)? {
                GNode::Inner(t) => HLabel { host: l.host.clone(), inner: t, height },
                GNode::Max(w) => HLabel { host: w, inner: Vec::new(), height },
            },
            None => HLabel { host: l.host.child(n), inner: Vec::new(), height },
        })
    }

    fn separation(&self, l: &HLabel) -> Result<Separation> {
        self.sys.host().separation(&l.host)
    }

    fn separation_bound(&self, d: usize) -> Separation {
        self.sys.separation_bound(d)
    }

    fn rise_promise(&self) -> RisePromise {
        self.sys.rise_promise()
    }

    fn uniform_hint(&self, c: &Constants, depth: usize) -> Result<Option<u64>> {
        self.sys.uniform_hint(c, depth)
    }
}

/// The hybrid of a host with a finite list of grafts.
pub struct FamilySystem {
    pub host: TreeRef,
    pub grafts: Vec<Arc<dyn LazyGraft>>,
    loss: Vec<Point>,
}

impl GraftSystem for FamilySystem {
    fn name(&self) -> String {
        format!("hybrid({}; {} grafts)", self.host.name(), self.grafts.len())
    }
    fn host(&self) -> &TreeRef {
        &self.host
    }
    fn graft_at(&self, v: &NodePath) -> Result<Option<Arc<dyn LazyGraft>>> {
        Ok(self.grafts.iter().find(|g| g.root() == v).cloned())
    }
    fn loss(&self) -> Vec<Point> {
        self.loss.clone()
    }
    fn rise_promise(&self) -> RisePromise {
        if self.grafts.is_empty() {
            self.host.rise_promise()
        } else {
            RisePromise::None
        }
    }
    fn uniform_hint(&self, c: &Constants, depth: usize) -> Result<Option<u64>> {
        if self.grafts.is_empty() {
            self.host.uniform_hint(c, depth)
        } else {
            Ok(None)
        }
    }
}

/// Checks that grafts rooted at `a` and `b` may coexist: incomparable roots,
/// or one root at or below a maximal node of the other.
pub fn roots_compatible(a: &dyn LazyGraft, b: &dyn LazyGraft) -> Result<bool> {
    let (ra, rb) = (a.root(), b.root());
    if ra == rb {
        return Ok(false);
    }
    if !ra.comparable(rb) {
        return Ok(true);
    }
    if ra.is_below(rb) {
        Ok(a.max_above(rb)?.is_some())
    } else {
        Ok(b.max_above(ra)?.is_some())
    }
}

/// `fhybr(F, φ)` for a finite consistent family `φ`.
pub fn fhybr(host: TreeRef, grafts: Vec<Arc<dyn LazyGraft>>) -> Result<HybridTree<FamilySystem>> {
    for i in 0..grafts.len() {
        for j in 0..i {
            if !roots_compatible(grafts[i].as_ref(), grafts[j].as_ref())? {
                return Err(Error::InconsistentFamily(format!(
                    "grafts at {} and {} overlap",
                    grafts[j].root(),
                    grafts[i].root()
                )));
            }
        }
    }
    let loss: BTreeSet<Point> = grafts.iter().flat_map(|g| g.cut()).collect();
    Ok(Canonical::new(Hybrid { sys: FamilySystem { host, grafts, loss: loss.into_iter().collect() } }))
}

/// Node of an explicit graft: finitely many listed sons, optionally followed
/// by the host sons of `tail.0` from index `tail.1` on, as maximal nodes.
#[derive(Clone, Debug)]
pub struct GraftNodeSpec {
    pub children: Vec<GNode>,
    pub tail: Option<(NodePath, u64)>,
}

/// A graft given by finitely many local nodes.
pub struct ExplicitGraft {
    pub host: TreeRef,
    pub root: NodePath,
    pub nodes: std::collections::BTreeMap<Vec<u64>, GraftNodeSpec>,
    pub removed: Vec<Point>,
}

impl ExplicitGraft {
    fn spec(&self, inner: &[u64]) -> Result<&GraftNodeSpec> {
        self.nodes
            .get(inner)
            .ok_or_else(|| Error::InconsistentFamily(format!("graft at {} has no node {inner:?}", self.root)))
    }

    fn node_leaf(&self, g: &GNode) -> Result<ClopenSet> {
        match g {
            GNode::Max(w) => self.host.leaf(w),
            GNode::Inner(t) => self.leaf(t),
        }
    }

    /// Every maximal node of the graft.
    pub fn listed_max(&self) -> Vec<NodePath> {
        self.nodes.values().flat_map(|s| s.children.iter()).filter_map(|g| match g {
            GNode::Max(w) => Some(w.clone()),
            GNode::Inner(_) => None,
        }).collect()
    }
}

impl LazyGraft for ExplicitGraft {
    fn root(&self) -> &NodePath {
        &self.root
    }

    fn son(&self, inner: &[u64], c: u64) -> Result<GNode> {
        let s = self.spec(inner)?;
        let len = s.children.len() as u64;
        if c < len {
            return Ok(s.children[c as usize].clone());
        }
        match &s.tail {
            Some((y, from)) => Ok(GNode::Max(y.child(from + (c - len)))),
            None => Err(Error::InconsistentFamily(format!("{inner:?} has only {len} sons"))),
        }
    }

    fn family(&self, inner: &[u64]) -> Result<Arc<dyn SonFamily>> {
        let s = self.spec(inner)?;
        let leaves = s.children.iter().map(|g| self.node_leaf(g)).collect::<Result<Vec<_>>>()?;
        let tail = match &s.tail {
            Some((y, from)) => Some((self.host.sons(y)?, *from)),
            None => None,
        };
        Ok(Arc::new(ExplicitFamily { leaves, tail }))
    }

    fn leaf(&self, inner: &[u64]) -> Result<ClopenSet> {
        if inner.is_empty() {
            return Ok(ClopenSet::minus(self.host.leaf(&self.root)?, self.removed.clone()));
        }
        self.family(inner)?.residual(0)
    }

    fn cut(&self) -> Vec<Point> {
        self.removed.clone()
    }

    fn max_above(&self, w: &NodePath) -> Result<Option<NodePath>> {
        let mut found = self.listed_max().into_iter().find(|m| m.is_prefix_of(w));
        if found.is_none() {
            for s in self.nodes.values() {
                if let Some((y, from)) = &s.tail {
                    if y.is_below(w) && w.entries()[y.height()] >= *from {
                        found = Some(w.truncate(y.height() + 1));
                    }
                }
            }
        }
        Ok(found)
    }
}

/// Explicit leaves followed by a tail of host sons.
pub struct ExplicitFamily {
    pub leaves: Vec<ClopenSet>,
    pub tail: Option<(Arc<dyn SonFamily>, u64)>,
}

impl SonFamily for ExplicitFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        let len = self.leaves.len() as u64;
        if n < len {
            return Ok(self.leaves[n as usize].clone());
        }
        match &self.tail {
            Some((f, from)) => f.leaf(from + (n - len)),
            None => Ok(ClopenSet::Empty),
        }
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        let len = self.leaves.len() as u64;
        let mut parts: Vec<ClopenSet> = self.leaves.iter().skip(n as usize).cloned().collect();
        if let Some((f, from)) = &self.tail {
            parts.push(f.residual(from + n.saturating_sub(len))?);
        }
        Ok(ClopenSet::union_disjoint(parts))
    }

    fn locate(&self, p: &Point) -> Result<Option<u64>> {
        for (i, l) in self.leaves.iter().enumerate() {
            if l.member(p)? {
                return Ok(Some(i as u64));
            }
        }
        if let Some((f, from)) = &self.tail {
            if let Some(s) = f.locate(p)? {
                if s >= *from {
                    return Ok(Some(self.leaves.len() as u64 + s - from));
                }
            }
        }
        Ok(None)
    }

    fn finite_len(&self) -> Option<u64> {
        self.tail.is_none().then_some(self.leaves.len() as u64)
    }

    fn index_hint(&self, c: &Constants) -> Result<Option<u64>> {
        let len = self.leaves.len() as u64;
        match &self.tail {
            None => Ok(Some(len)),
            Some((f, from)) => Ok(f.index_hint(c)?.map(|h| len + h.saturating_sub(*from))),
        }
    }
}
