use thiserror::Error;

/// Numerical failures raised by the linear-algebra kernel and the evolution engine.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix dimension {0} outside supported range 1..={max}", max = crate::tolerances::MAX_DIM)]
    InvalidDimension(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry encountered ({0})")]
    NonFinite(&'static str),
    #[error("matrix is not Hermitian (relative residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("Jacobi diagonalization did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("matrix is not positive-definite (eigenvalues in [{min:.3e}, {max:.3e}])")]
    NotPositiveDefinite { min: f64, max: f64 },
    #[error("matrix is singular or ill-conditioned (pivot {pivot:.3e})")]
    Singular { pivot: f64 },
    #[error("physical-frame Hamiltonian not Hermitian at t = {t} (residual {residual:.3e})")]
    FrameNotHermitian { t: f64, residual: f64 },
    #[error("initial state has vanishing physical norm")]
    ZeroInitialNorm,
    #[error("trajectory carries no propagator samples")]
    MissingPropagators,
    #[error("index {k} is not an interior grid index (steps = {steps})")]
    NotInterior { k: usize, steps: usize },
    #[error("invalid time grid: {0}")]
    InvalidGrid(String),
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
