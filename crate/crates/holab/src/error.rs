//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation requires a curved model (c = ±4), got the flat model")]
    UnsupportedModel,

    #[error("representative is not on the total space: |<z,z>| deviates by {defect:.3e} at {point}")]
    InvalidRepresentative { point: String, defect: f64 },

    #[error("degenerate immersion at {point}: {reason}")]
    DegenerateImmersion { point: String, reason: String },

    #[error("vector is not normal to the submanifold (projection residual {residual:.3e})")]
    NotNormal { residual: f64 },

    #[error("tolerance {0} outside the admissible range (0, pi/4)")]
    InvalidTolerance(f64),

    #[error("matrix logarithm did not converge: {0}")]
    NonconvergentLog(String),

    #[error("unknown catalog entry `{0}`")]
    NotFound(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("check `{check}` precondition failed at {point}: {reason} (defect {defect:.3e})")]
    Precondition {
        check: String,
        point: String,
        reason: String,
        defect: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
