//! Trees with one deliberately broken son family.

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::space::Space;
use crate::symsets::{ClopenSet, Constants};
use crate::tree::{FoliageTree, RisePromise, Separation, SonFamily, TreeRef};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FaultKind {
    /// Son `n` also covers son `n + 1`.
    Overlap,
    /// Son `n` also covers the next sibling of the node.
    Escape,
    /// The family forgets which points were removed.
    KeepPoint,
}

impl FaultKind {
    pub fn parse(s: &str) -> Result<FaultKind> {
        match s {
            "overlap" => Ok(FaultKind::Overlap),
            "escape" => Ok(FaultKind::Escape),
            "keep-point" => Ok(FaultKind::KeepPoint),
            _ => Err(Error::Config(format!("unknown fault {s:?}"))),
        }
    }
}

pub struct FaultTree {
    pub inner: TreeRef,
    pub kind: FaultKind,
    pub at: NodePath,
    pub son: u64,
}

pub fn fault_tree(inner: TreeRef, kind: FaultKind, at: NodePath, son: u64) -> Result<FaultTree> {
    if kind == FaultKind::Escape && at.is_root() {
        return Err(Error::Config("an escaping son needs a non-root node".into()));
    }
    Ok(FaultTree { inner, kind, at, son })
}

/// `a` with every point removal undone.
pub fn strip_removals(a: &ClopenSet) -> ClopenSet {
    match a {
        ClopenSet::Minus(inner, _) => strip_removals(inner),
        ClopenSet::FinUnion(ms) => ClopenSet::FinUnion(ms.iter().map(strip_removals).collect()),
        ClopenSet::Box(fs) => ClopenSet::Box(fs.iter().map(|(i, f)| (*i, strip_removals(f))).collect()),
        other => other.clone(),
    }
}

struct FaultFamily {
    inner: Arc<dyn SonFamily>,
    kind: FaultKind,
    son: u64,
    extra: ClopenSet,
}

impl SonFamily for FaultFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        let l = self.inner.leaf(n)?;
        Ok(match self.kind {
            FaultKind::KeepPoint => strip_removals(&l),
            _ if n == self.son => ClopenSet::FinUnion(vec![l, self.extra.clone()]),
            _ => l,
        })
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        let r = self.inner.residual(n)?;
        Ok(match self.kind {
            FaultKind::KeepPoint => strip_removals(&r),
            _ => r,
        })
    }

    fn locate(&self, p: &Point) -> Result<Option<u64>> {
        self.inner.locate(p)
    }

    fn finite_len(&self) -> Option<u64> {
        self.inner.finite_len()
    }

    fn index_hint(&self, c: &Constants) -> Result<Option<u64>> {
        let mut c = c.clone();
        c.add_set(&self.extra);
        self.inner.index_hint(&c).map(|h| h.map(|h| h.max(self.son + 2)))
    }
}

impl FoliageTree for FaultTree {
    fn name(&self) -> String {
        format!("fault({}; {:?} at {} son {})", self.inner.name(), self.kind, self.at, self.son)
    }
    fn space(&self) -> Space {
        self.inner.space()
    }
    fn root_leaf(&self) -> ClopenSet {
        self.inner.root_leaf()
    }
    fn removed_points(&self) -> Vec<Point> {
        self.inner.removed_points()
    }
    fn sons(&self, v: &NodePath) -> Result<Arc<dyn SonFamily>> {
        let fam = self.inner.sons(v)?;
        if v != &self.at {
            return Ok(fam);
        }
        let extra = match self.kind {
            FaultKind::Overlap => fam.leaf(self.son + 1)?,
            FaultKind::Escape => {
                let (parent, last) = v.parent().expect("checked non-root");
                self.inner.leaf(&parent.child(last + 1))?
            }
            FaultKind::KeepPoint => ClopenSet::Empty,
        };
        Ok(Arc::new(FaultFamily { inner: fam, kind: self.kind, son: self.son, extra }))
    }
    fn separation(&self, v: &NodePath) -> Result<Separation> {
        self.inner.separation(v)
    }
    fn separation_bound(&self, d: usize) -> Separation {
        self.inner.separation_bound(d)
    }
    fn rise_promise(&self) -> RisePromise {
        RisePromise::None
    }
}
