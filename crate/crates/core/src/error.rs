use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("target signal has zero norm")]
    ZeroTarget,

    #[error("all measurements are zero")]
    ZeroMeasurements,

    #[error("objective is not linear; the duality gap is only defined for linear objectives")]
    NonLinearObjective,

    #[error("root bracketing failed on [{lo}, {hi}]")]
    Bracketing { lo: f64, hi: f64 },

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("numerical inconsistency: {0}")]
    Numerical(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
