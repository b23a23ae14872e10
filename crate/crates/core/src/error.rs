use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("variable universes differ: {left:?} vs {right:?}")]
    UniverseMismatch { left: Vec<String>, right: Vec<String> },

    #[error("hyperplane {index} has a zero coefficient vector")]
    ZeroColumn { index: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("kernel condition violated: A_C * p != 0")]
    NotInKernel,

    #[error("undetermined: {reason}")]
    Undetermined { reason: String },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("region containing the seed point is unbounded")]
    Unbounded,

    #[error("quadrature did not converge (last relative change {0:e})")]
    NoConvergence(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
