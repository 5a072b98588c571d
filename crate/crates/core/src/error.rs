use crate::path::NodePath;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("point {0} lies outside the root leaf")]
    PointOutsideRoot(String),
    #[error("partition violation at {node}: {detail}")]
    PartitionViolation { node: NodePath, detail: String },
    #[error("arity must be at least 1")]
    ArityZero,
    #[error("a product needs at least two coordinates")]
    LambdaTooSmall,
    #[error("component {index} failed verification: {detail}")]
    ComponentNotVerified { index: usize, detail: String },
    #[error("finite intersection empty within the enumerable prefix: {0}")]
    FipViolation(String),
    #[error("refinement fails: {0}")]
    NotRefining(String),
    #[error("alpha is not strictly increasing: {0}")]
    AlphaNotIncreasing(String),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("inconsistent graft family: {0}")]
    InconsistentFamily(String),
    #[error("son family at {0} is finite")]
    NotOmegaBranching(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("index overflow: {0}")]
    Overflow(String),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
