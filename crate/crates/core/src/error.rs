use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid Cartan type: {0}")]
    CartanType(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("contract violated: {0}")]
    Contract(String),

    #[error("character decomposition became inconsistent at beta {beta:?} (residual {residual})")]
    Inconsistent { beta: Vec<i64>, residual: i128 },

    #[error("resource limit: weight space {beta:?} has dimension {dim}, total {total} exceeds budget {budget}")]
    Resource {
        beta: Vec<i64>,
        dim: usize,
        total: usize,
        budget: usize,
    },

    #[error("internal error: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
