//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite value encountered in {0}")]
    NonFinite(String),

    #[error("non-finite conditional parameters at level {level} ({which})")]
    BadConditional { level: usize, which: &'static str },

    #[error("degenerate covariance: {0}")]
    DegenerateCovariance(String),

    #[error("singular system: {0}")]
    SingularSystem(String),

    #[error("power iteration failed: start vector vanished after {attempts} attempts")]
    PowerIterationDegenerate { attempts: usize },

    #[error("gradient unavailable for this model: {0}")]
    GradientUnavailable(&'static str),

    #[error("all sample pairs were degenerate (zero input distance)")]
    AllPairsDegenerate,

    #[error("solver aborted: non-finite iterate at iteration {iteration}")]
    SolverDiverged { iteration: usize },

    #[error("malformed {format} file at byte {offset}: {reason}")]
    MalformedFile {
        format: &'static str,
        offset: usize,
        reason: String,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
