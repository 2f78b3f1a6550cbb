use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GwError {
    #[error("unsupported target: {0}")]
    UnsupportedTarget(String),
    #[error("class belongs to a different target basis")]
    MismatchedTarget,
    #[error("invalid curve class: {0}")]
    InvalidCurveClass(String),
    #[error("invalid insertion: {0}")]
    InvalidInsertion(String),
    #[error("t-exponent {exp} lies outside the valid window [{lo}, {hi}]")]
    OutOfWindow { exp: i64, lo: i64, hi: i64 },
    #[error("expansion order {order} too small, need at least {needed}")]
    OrderTooSmall { order: i64, needed: i64 },
    #[error("degree-zero bracket with {0} insertions is unstable")]
    UnstableDegreeZero(usize),
    #[error("at most one descendant insertion is supported")]
    TooManyDescendants,
    #[error("reduction precondition failed: {0}")]
    Precondition(String),
    #[error("pairing matrix is singular")]
    SingularPairing,
    #[error("memo conflict at {key}: stored {stored}, new {new}")]
    MemoConflict {
        key: String,
        stored: String,
        new: String,
    },
    #[error("recursion is not well-founded at {0}")]
    NotWellFounded(String),
    #[error("unknown suite: {0}")]
    UnknownSuite(String),
    #[error("instance-size bound exceeded: {0}")]
    BoundExceeded(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GwError>;
