//! The standard tree on Baire space: the leaf at `x` is the cylinder of `x`.

use crate::error::Result;
use crate::path::NodePath;
use crate::space::Space;
use crate::symsets::{ClopenSet, Constants, FamilyRef};
use crate::tree::{FoliageTree, PieceFamily, RisePromise, Separation, SonFamily};
use std::sync::Arc;

#[derive(Clone, Copy, Debug, Default)]
pub struct StandardTree;

pub fn standard_tree() -> StandardTree {
    StandardTree
}

impl FoliageTree for StandardTree {
    fn name(&self) -> String {
        "standard".into()
    }

    fn space(&self) -> Space {
        Space::Baire
    }

    fn sons(&self, v: &NodePath) -> Result<Arc<dyn SonFamily>> {
        Ok(Arc::new(PieceFamily(FamilyRef::Std(v.clone()))))
    }

    fn leaf(&self, v: &NodePath) -> Result<ClopenSet> {
        Ok(ClopenSet::Cyl(v.clone()))
    }

    fn separation(&self, v: &NodePath) -> Result<Separation> {
        Ok(Separation::Prefix(v.height() as u64))
    }

    fn separation_bound(&self, d: usize) -> Separation {
        Separation::Prefix(d as u64)
    }

    fn rise_promise(&self) -> RisePromise {
        RisePromise::Cofinite
    }

    fn uniform_hint(&self, c: &Constants, _depth: usize) -> Result<Option<u64>> {
        Ok(Some(c.nat_max.map_or(0, |m| m + 1)))
    }
}
