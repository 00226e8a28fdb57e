use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed outcome sequence: {0}")]
    MalformedSequence(String),

    #[error("{what} = {value} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        value: usize,
        cap: usize,
    },

    #[error("the constraint set admits no infinite run from the all-hit startup")]
    EmptyLanguage,

    #[error("strategy mismatch: {left} vs {right}")]
    StrategyMismatch { left: String, right: String },

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("invalid constraint: {0}")]
    InvalidConstraint(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown bound estimator `{name}` (available: {available})")]
    UnknownEstimator { name: String, available: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
