//! Shift the components' filters, stretch each component, take the product.

use super::alpha::ShiftAlpha;
use super::omega::FilterCert;
use super::product::{product_tree, ProductTree};
use super::rescale::rescale_tree;
use super::shift::ShiftResult;
use crate::error::{Error, Result};
use crate::space::Arity;
use crate::tree::TreeRef;
use std::sync::Arc;

pub struct Pipeline {
    pub tree: Arc<ProductTree>,
    pub shift: Arc<ShiftResult>,
    /// The stretched components, one per coordinate.
    pub stretched: Vec<TreeRef>,
}

/// Components paired with certificates `γ_n` (also used as `δ_n`).
pub fn theorem2_pipeline(components: Vec<(TreeRef, FilterCert)>) -> Result<Pipeline> {
    if components.len() < 2 {
        return Err(Error::LambdaTooSmall);
    }
    let arity = Arity::Finite(components.len());
    let certs: Vec<FilterCert> = components.iter().map(|c| c.1.clone()).collect();
    let shift = Arc::new(ShiftResult::new(arity, certs.clone(), certs)?);
    let mut stretched: Vec<TreeRef> = Vec::new();
    for (i, (t, _)) in components.into_iter().enumerate() {
        let alpha = Arc::new(ShiftAlpha { shift: shift.clone(), coord: i });
        stretched.push(Arc::new(rescale_tree(t, alpha)?));
    }
    let tree = product_tree(arity, stretched.clone())?;
    Ok(Pipeline { tree: Arc::new(tree), shift, stretched })
}
