use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Lie type: {0}")]
    InvalidLieType(String),
    #[error("invalid weight: {0}")]
    InvalidWeight(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("q-binomial out of range: n = {n}, k = {k}")]
    QBinomialRange { n: i64, k: u32 },
    #[error("module V({lambda}) has dimension {dim}, above the size limit {limit}")]
    SizeLimit { lambda: String, dim: u64, limit: u64 },
    #[error("rational function has a pole at q = 1")]
    Pole,
    #[error("division by zero")]
    DivisionByZero,
    #[error("subspace of weight {0} is not preserved by the operator")]
    NonInvariantSubspace(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
