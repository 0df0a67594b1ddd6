use thiserror::Error;

/// Errors surfaced by the library. The CLI maps these onto its exit-code
/// taxonomy; in-process callers match on the variants directly.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("zero state vector")]
    ZeroVector,
    #[error("affine chart undefined (z^0 = 0)")]
    ChartUndefined,
    #[error("chart mismatch: expected {expected}, got {got}")]
    ChartMismatch { expected: &'static str, got: &'static str },
    #[error("symmetry data evaluated at different states")]
    StateMismatch,
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("operator singular or ill-conditioned (cond {0:.3e})")]
    SingularOperator(f64),
    #[error("derivative data inconsistent with any state (residual {0:.3e})")]
    InconsistentData(f64),
    #[error("tensor dimension {0} exceeds configured maximum {1}")]
    DimensionTooLarge(usize, usize),
    #[error("moment order {0} exceeds cap {1}")]
    MomentOrderTooLarge(usize, usize),
    #[error("eigendecomposition failed to converge")]
    ConvergenceFailure,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
