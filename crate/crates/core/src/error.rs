use thiserror::Error;

/// Errors produced by the analytic, oracle and simulation layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("hypotheses are indistinguishable (N1 = {n1} <= N0 = {n0})")]
    DegenerateDiscrimination { n0: f64, n1: f64 },

    #[error("asymptotic expansion requires x > 1 (got x = {x})")]
    AsymptoticsInvalid { x: f64 },

    #[error("fading model has no density")]
    NoDensity,

    #[error("operation requires a random fading model")]
    DeterministicFading,

    #[error(
        "truncation dimension {dim} leaves trace deficit {deficit:.3e} (tolerance {tol:.1e}); try dim >= {suggested}"
    )]
    TruncationTooSmall {
        dim: usize,
        deficit: f64,
        tol: f64,
        suggested: usize,
    },

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("copy space of dimension {dim} exceeds the configured cap of {cap}")]
    ResourceLimit { dim: usize, cap: usize },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        field,
        reason: reason.into(),
    }
}
