//! Tree builders.

pub mod alpha;
pub mod cocountable;
pub mod fault;
pub mod omega;
pub mod pipeline;
pub mod product;
pub mod rescale;
pub mod shift;
pub mod sorgenfrey;
pub mod standard;

pub use alpha::{alpha_from_json, Affine, Alpha, AlphaRef, Identity, ShiftAlpha, Table};
pub use cocountable::{cocountable_tree, CocountableTree};
pub use fault::{fault_tree, strip_removals, FaultKind, FaultTree};
pub use omega::{FilterCert, OmegaSet};
pub use pipeline::{theorem2_pipeline, Pipeline};
pub use product::{product_tree, ProductTree};
pub use rescale::{rescale_tree, RescaledTree};
pub use shift::ShiftResult;
pub use sorgenfrey::{sorgenfrey_tree, SorgenfreyTree};
pub use standard::{standard_tree, StandardTree};

use crate::path::NodePath;
use crate::symsets::{are_disjoint, equal, is_subset, Decision};
use crate::tree::FoliageTree;

/// Cheap sanity check of a component: full root leaf and an exact
/// partition at the root.
pub fn quick_component_check(t: &dyn FoliageTree) -> Result<(), String> {
    let space = t.space();
    let root = t.root_leaf();
    let full = crate::symsets::ClopenSet::full(&space);
    let err = |e: crate::error::Error| e.to_string();
    if equal(&space, &root, &full).map_err(err)? != Decision::Yes {
        return Err(format!("root leaf of {} is not the whole space", t.name()));
    }
    let fam = t.sons(&NodePath::root()).map_err(err)?;
    if equal(&space, &fam.residual(0).map_err(err)?, &root).map_err(err)? != Decision::Yes {
        return Err(format!("root sons of {} do not cover the root", t.name()));
    }
    for n in 0..4 {
        let leaf = fam.leaf(n).map_err(err)?;
        let rest = fam.residual(n + 1).map_err(err)?;
        if is_subset(&space, &leaf, &root).map_err(err)? != Decision::Yes
            || are_disjoint(&space, &leaf, &rest).map_err(err)? != Decision::Yes
        {
            return Err(format!("root son {n} of {} overlaps or escapes", t.name()));
        }
    }
    Ok(())
}
