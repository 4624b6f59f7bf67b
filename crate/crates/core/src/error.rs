use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("quotient is not finite over the base field")]
    NotFinite,
    #[error("ideal is not zero-dimensional in the fiber variables")]
    NotZeroDimensional,
    #[error("could not lift to separated eliminants: {0}")]
    LiftFailure(String),
    #[error("random linear form failed to separate the fiber after {0} attempts")]
    EliminantDegenerate(usize),
    #[error("all {0} sampled projections were degenerate")]
    AllProjectionsDegenerate(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("basis does not specialize stably to the generic point of the base")]
    SpecializationUnstable,
    #[error("branch undefined: {0}")]
    BranchUndefined(String),
    #[error("cannot descend to the base: {0}")]
    Descent(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
