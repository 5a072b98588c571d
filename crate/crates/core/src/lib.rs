//! Lazy Baire foliage trees with exact symbolic leaves.

pub mod error;
pub mod export;
pub mod path;
pub mod point;
pub mod rational;
pub mod space;
pub mod symsets;
pub mod tree;
pub mod config;
pub mod constructions;
pub mod hybrid;
pub mod verify;

pub use error::{Error, Result};
pub use path::NodePath;
pub use point::Point;
pub use space::{Arity, Space};
pub use symsets::{ClopenSet, Decision};
