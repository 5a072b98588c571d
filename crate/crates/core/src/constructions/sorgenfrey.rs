//! A tree on the Sorgenfrey line.
//!
//! The root is cut into unit intervals `[z, z+1)` with `z` running through
//! `0, 1, −1, 2, −2, …`; below the root `[a, b)` is cut at
//! `x_n = b − (b−a)·2^{−n}`, so residuals stay single intervals.

use crate::error::{Error, Result};
use crate::path::NodePath;
use crate::point::Point;
use crate::rational::{pow2_neg, Q};
use crate::space::Space;
use crate::symsets::{ClopenSet, Constants, FamilyRef};
use crate::tree::{piece_hint, FoliageTree, PieceFamily, RisePromise, Separation, SonFamily};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, Default)]
pub struct SorgenfreyTree;

pub fn sorgenfrey_tree() -> SorgenfreyTree {
    SorgenfreyTree
}

impl SorgenfreyTree {
    /// The family whose pieces are the sons of `v`.
    pub fn family(&self, v: &NodePath) -> FamilyRef {
        let mut fam = FamilyRef::SorgRoot;
        for &n in v.entries() {
            let (lo, hi) = fam.piece_bounds(n).expect("sorgenfrey pieces are intervals");
            fam = FamilyRef::SorgSub { lo, hi };
        }
        fam
    }

    /// Endpoints of the leaf at `v`; `None` at the root.
    pub fn interval(&self, v: &NodePath) -> Option<(Q, Q)> {
        match self.family(v) {
            FamilyRef::SorgSub { lo, hi } => Some((lo, hi)),
            _ => None,
        }
    }

    /// The path of height `d` whose leaf contains `x`.
    pub fn path_of(&self, x: &Q, d: usize) -> NodePath {
        let p = Point::Sorg(x.clone());
        let mut v = NodePath::root();
        for _ in 0..d {
            let n = self.family(&v).locate(&p).expect("families cover their region");
            v = v.child(n);
        }
        v
    }
}

impl FoliageTree for SorgenfreyTree {
    fn name(&self) -> String {
        "sorgenfrey".into()
    }

    fn space(&self) -> Space {
        Space::Sorg
    }

    fn sons(&self, v: &NodePath) -> Result<Arc<dyn SonFamily>> {
        Ok(Arc::new(PieceFamily(self.family(v))))
    }

    fn leaf(&self, v: &NodePath) -> Result<ClopenSet> {
        Ok(self.family(v).region())
    }

    fn separation(&self, v: &NodePath) -> Result<Separation> {
        Ok(Separation::Width(self.interval(v).map(|(a, b)| b - a)))
    }

    fn separation_bound(&self, d: usize) -> Separation {
        Separation::Width((d > 0).then(|| pow2_neg(d as u64 - 1)))
    }

    fn rise_promise(&self) -> RisePromise {
        RisePromise::Cofinite
    }

    /// Only the nodes containing a constant have sons that differ; those form
    /// one chain per constant.
    fn uniform_hint(&self, c: &Constants, depth: usize) -> Result<Option<u64>> {
        if !c.coords.is_empty() {
            return Err(Error::SpaceMismatch("product constants on the sorgenfrey line".into()));
        }
        let mut h = piece_hint(&FamilyRef::SorgRoot, c);
        for r in &c.rats {
            let path = self.path_of(r, depth.saturating_sub(1));
            for k in 0..path.height() {
                h = h.max(piece_hint(&self.family(&path.truncate(k + 1)), c));
            }
        }
        Ok(Some(h))
    }
}
