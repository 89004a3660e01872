//! Finite-dimensional quantum evolution under time-dependent metric operators.
//!
//! A quasi-Hermitian Hamiltonian `H(t)` is Hermitian with respect to a metric
//! `Θ(t)`. This crate integrates three competing evolution laws for such a
//! system, extracts the generator that actually drives each one, and measures
//! how far each run is from unitarity in the time-dependent inner product and
//! from observability of its generator.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod app;
pub mod error;
pub mod evolution;
pub mod invariants;
pub mod linalg;
pub mod model;
pub mod random;
pub mod tolerances;

pub use error::{Error, Result};
pub use evolution::{EvolutionMode, TimeGrid, Trajectory};
pub use invariants::{ResidualSeries, TheoremVerdict};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
pub use model::{MetricFamily, OperatorFamily, Scenario, ScenarioSpec};
