//! Grafting and hybrid trees.

pub mod finite;
mod lazy;
mod shoots;

pub use lazy::{
    fhybr, roots_compatible, ExplicitFamily, ExplicitGraft, FamilySystem, GNode, GraftNodeSpec, GraftSystem,
    HLabel, Hybrid, HybridTree, LazyGraft,
};
pub use shoots::{preserves_shoots, ShootsReport};
