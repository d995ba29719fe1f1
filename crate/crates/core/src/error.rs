use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateId(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("invalid edge: {0}")]
    InvalidEdge(String),
    #[error("graph is not a tree: {0}")]
    NotATree(String),
    #[error("intersection form is not negative definite")]
    NotNegativeDefinite,
    #[error("reduction requires at least one node")]
    NoNodes,
    #[error("vector is not an element of the dual lattice")]
    NotInDualLattice,
    #[error("variable sets differ: {0}")]
    VariableMismatch(String),
    #[error("invalid denominator factor: {0}")]
    InvalidFactor(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid Newton pairs: {0}")]
    InvalidNewtonPairs(String),
    #[error("invalid surgery coefficient: {0}")]
    InvalidSurgery(String),
    #[error("enumeration budget exceeded ({0} terms)")]
    BudgetExceeded(u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
