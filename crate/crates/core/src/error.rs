use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InputDomain(String),

    #[error("dense tensor needs {needed} entries, capacity is {cap}")]
    Capacity { needed: u128, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("rank-one sum needs at least one term")]
    EmptyTerms,

    #[error("contraction vanishes at this point (norm {norm:e}); power step undefined")]
    DegeneratePoint { norm: f64 },

    #[error("newton refinement failed after {iterations} iterations (residual {residual:e})")]
    RefineFailure { residual: f64, iterations: usize },

    #[error("tensor is zero; eigen-equation is trivially satisfied")]
    ZeroTensor,

    #[error("|lambda| = {lambda:e} is at or below the floor {floor:e}")]
    LambdaBelowFloor { lambda: f64, floor: f64 },

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    Asymmetric(f64),

    #[error("frame has no vectors")]
    EmptyFrame,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
