//! Reference systems shipped with the engine. All are two-level, integrated
//! over `[0, 1]` with 1000 steps.

use super::scenario::Scenario;
use super::spec::{FrameSpec, GridSpec, MetricSpec, ScenarioSpec};
use crate::linalg::ComplexMatrix;

pub const CONST_METRIC: &str = "CONST_METRIC";
pub const DIAG_GROWTH: &str = "DIAG_GROWTH";
pub const ROTATING: &str = "ROTATING";
pub const NAIVE_CONTRAST: &str = "NAIVE_CONTRAST";

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).expect("2x2")
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, -1.0])
}

fn spec(name: &str, frame: ComplexMatrix, metric: MetricSpec, naive_demo: bool) -> ScenarioSpec {
    ScenarioSpec {
        name: name.to_string(),
        hbar: 1.0,
        frame: FrameSpec::Constant { matrix: frame },
        metric,
        initial_state: None,
        grid: GridSpec::default(),
        naive_demo,
    }
}

pub fn builtin_scenario_specs() -> Vec<ScenarioSpec> {
    vec![
        spec(
            CONST_METRIC,
            pauli_x(),
            MetricSpec::Constant {
                matrix: ComplexMatrix::from_real_diag(&[1.0, 4.0]),
            },
            false,
        ),
        spec(
            DIAG_GROWTH,
            pauli_x(),
            MetricSpec::DiagGrowth { alpha: 0.5 },
            false,
        ),
        spec(
            ROTATING,
            pauli_z(),
            MetricSpec::Rotating { beta: 1.0, mu: 3.0 },
            false,
        ),
        spec(
            NAIVE_CONTRAST,
            pauli_x(),
            MetricSpec::DiagGrowth { alpha: 0.5 },
            true,
        ),
    ]
}

pub fn find_builtin(name: &str) -> Option<ScenarioSpec> {
    builtin_scenario_specs()
        .into_iter()
        .find(|s| s.name == name)
}

pub fn builtin_scenarios() -> Vec<Scenario> {
    builtin_scenario_specs()
        .iter()
        .map(|s| s.build().expect("built-in scenarios are valid"))
        .collect()
}
