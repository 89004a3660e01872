//! Time-parametrized operators, metrics, and the scenarios built from them.

mod builtins;
mod family;
mod scenario;
mod spec;

pub use builtins::{
    builtin_scenario_specs, builtin_scenarios, find_builtin, CONST_METRIC, DIAG_GROWTH,
    NAIVE_CONTRAST, ROTATING,
};
pub use family::{omega_dot_of, omega_of, MatrixFn, MetricFamily, OperatorFamily};
pub use scenario::{build_quasi_hermitian, pseudo_hermiticity_residual, Scenario};
pub use spec::{FrameSpec, GridSpec, MetricSpec, ScenarioSpec, UnknownParameter};
