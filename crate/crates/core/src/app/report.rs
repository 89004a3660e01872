use serde::{Deserialize, Serialize};

use crate::evolution::EvolutionMode;
use crate::invariants::TheoremVerdict;
use crate::linalg::ComplexVector;
use crate::model::ScenarioSpec;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeReport {
    pub mode: EvolutionMode,
    pub terminal_time: f64,
    pub terminal_state: ComplexVector,
    pub max_unitarity_drift: f64,
    /// Absent for covariant runs, which carry no propagator.
    pub max_intertwining_residual: Option<f64>,
    pub max_generalized_ph_residual: f64,
    pub verdict: TheoremVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub seed: u64,
    /// The scenario as run, with any grid override applied.
    pub scenario: ScenarioSpec,
    pub modes: Vec<ModeReport>,
    pub all_consistent: bool,
    /// Wall-clock time; excluded from determinism guarantees.
    pub runtime_ms: f64,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.all_consistent {
            super::exit::SUCCESS
        } else {
            super::exit::INCONSISTENT
        }
    }

    pub fn mode(&self, mode: EvolutionMode) -> Option<&ModeReport> {
        self.modes.iter().find(|m| m.mode == mode)
    }

    /// The report as JSON with `runtime_ms` zeroed, for reproducibility checks.
    pub fn deterministic_json(&self) -> String {
        let mut copy = self.clone();
        copy.runtime_ms = 0.0;
        serde_json::to_string_pretty(&copy).expect("report serializes")
    }
}
