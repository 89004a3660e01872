//! Numerical thresholds shared by the operations and their tests.

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 64;

/// Relative anti-Hermitian mass tolerated by the eigensolver.
pub const HERMITIAN_INPUT_TOL: f64 = 1e-10;
/// Jacobi stops once the off-diagonal Frobenius mass drops below this, relative to ‖A‖_F.
pub const JACOBI_OFF_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Positive-definiteness floor: λ_min > PD_FLOOR · λ_max.
pub const PD_FLOOR: f64 = 1e-10;

/// LU pivots below this fraction of ‖A‖_F are treated as singular.
pub const PIVOT_FLOOR: f64 = 1e-14;
/// Ceiling on the pivot-magnitude condition estimate.
pub const CONDITION_CEILING: f64 = 1e12;

/// Scaled Frobenius norm at which the Taylor series is evaluated.
pub const EXPM_SCALED_NORM: f64 = 0.5;
pub const EXPM_TAYLOR_ORDER: usize = 16;

/// Central-difference step for ∂tω.
pub const OMEGA_DIFF_STEP: f64 = 1e-6;
/// Central-difference step for operator families without an analytic derivative.
pub const FAMILY_DIFF_STEP: f64 = 1e-5;

/// Hermiticity of the physical-frame Hamiltonian h(t), relative.
pub const FRAME_HERMITIAN_TOL: f64 = 1e-8;
/// Pseudo-Hermiticity required of a scenario Hamiltonian at t0.
pub const SCENARIO_PH_TOL: f64 = 1e-8;

/// Denominators below this make a relative norm drift undefined.
pub const ZERO_NORM_FLOOR: f64 = 1e-14;

/// Theorem witnesses: metric counts as time-dependent above this.
pub const TIME_DEPENDENCE_THRESHOLD: f64 = 1e-6;
/// Theorem witnesses: evolution counts as unitary at or below this drift.
pub const UNITARY_THRESHOLD: f64 = 1e-6;
/// Theorem witnesses: generator counts as observable at or below this defect.
pub const OBSERVABLE_THRESHOLD: f64 = 1e-6;

/// Capacity of the per-metric ω memo table.
pub const OMEGA_CACHE_CAPACITY: usize = 1 << 16;
