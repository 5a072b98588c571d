//! Stretching a tree's heights along a strictly increasing map `α`.
//!
//! Each node `v` of height `h` gets an interpolating graft of
//! `k = α(h) − α(h−1)` levels whose maximal nodes are the sons of `v`:
//! son `s` sits below the local path `dec_k(s)`.

use super::alpha::{alpha_at, AlphaRef};
use crate::error::{Error, Result};
use crate::hybrid::{GNode, GraftSystem, Hybrid, HybridTree, LazyGraft};
use crate::path::NodePath;
use crate::point::Point;
use crate::symsets::{cantor, ClopenSet, Constants, FamilyRef, TupleSel};
use crate::tree::{Canonical, RisePromise, Separation, SonFamily, TreeRef};
use std::sync::Arc;

pub struct RescaleSystem {
    pub host: TreeRef,
    pub alpha: AlphaRef,
}

pub type RescaledTree = HybridTree<RescaleSystem>;

pub fn rescale_tree(host: TreeRef, alpha: AlphaRef) -> Result<RescaledTree> {
    let mut prev = -1i64;
    for n in 0..64 {
        let a = alpha_at(alpha.as_ref(), n)?;
        if a <= prev {
            return Err(Error::AlphaNotIncreasing(format!("{}: α({n}) = {a} after {prev}", alpha.name())));
        }
        prev = a;
    }
    Ok(Canonical::new(Hybrid { sys: RescaleSystem { host, alpha } }))
}

impl RescaleSystem {
    /// `k(v)` for a node of height `h`.
    pub fn stretch(&self, h: usize) -> Result<usize> {
        let a = self.alpha.as_ref();
        let k = alpha_at(a, h as i64)? - alpha_at(a, h as i64 - 1)?;
        if k < 1 {
            return Err(Error::AlphaNotIncreasing(format!("{} at {h}", self.alpha.name())));
        }
        Ok(k as usize)
    }

    /// `α(h−1) + 1`: the hybrid height of a host node of height `h`.
    pub fn host_height(&self, h: usize) -> Result<usize> {
        Ok((alpha_at(self.alpha.as_ref(), h as i64 - 1)? + 1) as usize)
    }
}

impl GraftSystem for RescaleSystem {
    fn name(&self) -> String {
        format!("rescale({}; {})", self.host.name(), self.alpha.name())
    }

    fn host(&self) -> &TreeRef {
        &self.host
    }

    fn graft_at(&self, v: &NodePath) -> Result<Option<Arc<dyn LazyGraft>>> {
        let k = self.stretch(v.height())?;
        let fam = self.host.sons(v)?;
        let pieces = if k == 1 {
            None
        } else {
            Some(fam.family_ref().ok_or_else(|| {
                Error::Unsupported(format!("stretching {} at {v}: sons are not an indexed piece family", self.host.name()))
            })?)
        };
        Ok(Some(Arc::new(StretchGraft { host: self.host.clone(), root: v.clone(), k, fam, pieces })))
    }

    fn loss(&self) -> Vec<Point> {
        Vec::new()
    }

    fn separation_bound(&self, d: usize) -> Separation {
        let mut h = 0;
        while self.host_height(h + 1).is_ok_and(|x| x <= d) {
            h += 1;
        }
        self.host.separation_bound(h)
    }

    fn rise_promise(&self) -> RisePromise {
        if self.alpha.is_identity() {
            self.host.rise_promise()
        } else {
            RisePromise::None
        }
    }

    fn uniform_hint(&self, c: &Constants, depth: usize) -> Result<Option<u64>> {
        self.host.uniform_hint(c, depth)
    }
}

/// The graft of `k + 1` levels at `root`.
pub struct StretchGraft {
    host: TreeRef,
    root: NodePath,
    k: usize,
    fam: Arc<dyn SonFamily>,
    pieces: Option<(FamilyRef, Vec<Point>)>,
}

impl LazyGraft for StretchGraft {
    fn root(&self) -> &NodePath {
        &self.root
    }

    fn son(&self, inner: &[u64], c: u64) -> Result<GNode> {
        let mut t = inner.to_vec();
        t.push(c);
        if t.len() < self.k {
            return Ok(GNode::Inner(t));
        }
        let s = cantor::encode(&t).ok_or_else(|| Error::Overflow(format!("tuple {t:?}")))?;
        Ok(GNode::Max(self.root.child(s)))
    }

    fn family(&self, inner: &[u64]) -> Result<Arc<dyn SonFamily>> {
        match &self.pieces {
            None => Ok(self.fam.clone()),
            Some((fam, pts)) => Ok(Arc::new(TupleFamily {
                fam: fam.clone(),
                pts: pts.clone(),
                k: self.k,
                tau: inner.to_vec(),
                host: self.fam.clone(),
            })),
        }
    }

    fn leaf(&self, inner: &[u64]) -> Result<ClopenSet> {
        if inner.is_empty() {
            return self.host.leaf(&self.root);
        }
        self.family(&inner[..inner.len() - 1])?.leaf(inner[inner.len() - 1])
    }

    fn cut(&self) -> Vec<Point> {
        Vec::new()
    }

    fn max_above(&self, w: &NodePath) -> Result<Option<NodePath>> {
        Ok(self.root.is_below(w).then(|| w.truncate(self.root.height() + 1)))
    }
}

/// Sons of the local node `tau`: the pieces whose decoded tuples extend
/// `tau⌢c`, one son per `c`.
pub struct TupleFamily {
    fam: FamilyRef,
    pts: Vec<Point>,
    k: usize,
    tau: Vec<u64>,
    host: Arc<dyn SonFamily>,
}

impl TupleFamily {
    fn sel(&self, tau: Vec<u64>, from: u64) -> ClopenSet {
        ClopenSet::minus(ClopenSet::sel(self.fam.clone(), TupleSel::new(self.k, tau, from)), self.pts.clone())
    }
}

impl SonFamily for TupleFamily {
    fn leaf(&self, n: u64) -> Result<ClopenSet> {
        let mut t = self.tau.clone();
        t.push(n);
        Ok(self.sel(t, 0))
    }

    fn residual(&self, n: u64) -> Result<ClopenSet> {
        Ok(self.sel(self.tau.clone(), n))
    }

    fn locate(&self, p: &Point) -> Result<Option<u64>> {
        let Some(s) = self.host.locate(p)? else { return Ok(None) };
        let t = cantor::decode(self.k, s);
        Ok((t[..self.tau.len()] == self.tau[..]).then(|| t[self.tau.len()]))
    }

    fn index_hint(&self, c: &Constants) -> Result<Option<u64>> {
        self.host.index_hint(c)
    }
}
