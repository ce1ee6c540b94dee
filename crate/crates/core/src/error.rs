use thiserror::Error;

/// Errors produced by body construction, solvers and checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("iteration cap of {cap} exceeded (best iterate {best:?}, gap {gap:e})")]
    IterationCap { cap: usize, best: Vec<f64>, gap: f64 },

    #[error("grid of {nodes} nodes exceeds the cap of {cap}; use a larger step")]
    GridTooLarge { nodes: u128, cap: u128 },

    #[error("body is not smooth: {0}")]
    NotSmooth(String),

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
