//! Error type shared by the exact and numerical layers.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("not a germ: polynomial does not vanish at the origin")]
    NotAGerm,

    #[error("f and g share a branch through the origin")]
    CommonBranch,

    #[error("algebraic tower degree limit {limit} exceeded")]
    TowerLimit { limit: u32 },

    #[error("non-isolated singularity")]
    NonIsolated,

    #[error("non-isolated pencil: all sampled members have non-isolated singularities")]
    NonIsolatedPencil,

    #[error("jacobian of (f, g) vanishes identically")]
    DegenerateJacobian,

    #[error("empty side selection: {0}")]
    DegenerateSide(String),

    #[error("fiber gluing interface mismatch: {0} vs {1} circles")]
    InterfaceMismatch(usize, usize),

    #[error("selection does not carry a fibered multilink: {0}")]
    NonFibered(String),

    #[error("flow construction refused: {0}")]
    FlowRefused(String),

    #[error("tube constraint system unsolvable: gradient of gamma lies in the span of z and grad F")]
    ItameViolationSample,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("internal limit exceeded: {0}")]
    InternalLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
