use thiserror::Error;

/// Errors raised by the sampling, spectral and closed-form routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("invalid pure state: {0}")]
    InvalidPureState(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("dimension order violated: m = {m} must not exceed n = {n}")]
    DimensionOrder { m: usize, n: usize },
    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("singular Ginibre sample encountered twice in a row")]
    SingularSample,
    #[error("parameter outside domain: {0}")]
    DomainError(String),
    #[error("quadrature error estimate {estimate:e} exceeds target {target:e}")]
    QuadratureFailure { estimate: f64, target: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown functional `{0}`")]
    UnknownFunctional(String),
}

impl Error {
    /// True for failures of the numerics rather than of the caller's input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure(_) | Error::SingularSample | Error::QuadratureFailure { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
