use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix shape is invalid: expected {expected} entries, got {found}")]
    InvalidShape { expected: usize, found: usize },

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: {expected} vs {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {expected} vs {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is not 1 (got {trace})")]
    InvalidTrace { trace: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state vector is not normalized (norm {norm})")]
    Unnormalized { norm: f64 },

    #[error("Bloch vector lies outside the unit ball (|r| = {norm})")]
    OutsideBlochBall { norm: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {sweeps} sweeps")]
    ConvergenceFailure { sweeps: usize },

    #[error("exhaustive search needs {evaluations} evaluations, cap is {cap}")]
    ComplexityRefusal { evaluations: u128, cap: u128 },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

pub type Result<T> = core::result::Result<T, Error>;
