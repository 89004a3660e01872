use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{RunConfig, ScenarioRef};
use super::output::{ensure_dir, write_sweep_csv};
use super::run::{resolve_scenario, run};
use super::{AppError, RunReport};
use crate::evolution::EvolutionMode;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub mode: EvolutionMode,
    pub max_unitarity_drift: f64,
    /// Verdict witness: maximum Θ-pseudo-Hermiticity defect of the run's generator.
    pub observability_defect: f64,
}

/// Runs `base` once per value of `parameter`, in parallel, and writes the
/// combined `sweep_<parameter>.csv` after all runs finish. Each run writes its
/// own outputs under `<output_dir>/<parameter>_<index>/`.
pub fn sweep(
    base: &RunConfig,
    parameter: &str,
    values: &[f64],
) -> Result<(Vec<RunReport>, Vec<SweepRow>), AppError> {
    base.validate()?;
    let spec = resolve_scenario(base)?;
    // Resolve the parameter before spending any compute.
    spec.clone().set_parameter(parameter, 0.0)?;

    let reports = values
        .par_iter()
        .enumerate()
        .map(|(i, &value)| {
            let mut s = spec.clone();
            s.set_parameter(parameter, value)?;
            let mut cfg = base.clone();
            cfg.scenario = ScenarioRef::Inline(Box::new(s));
            cfg.grid = None;
            cfg.output_dir = base.output_dir.join(format!("{parameter}_{i}"));
            run(&cfg)
        })
        .collect::<Result<Vec<_>, AppError>>()?;

    let rows: Vec<SweepRow> = values
        .iter()
        .zip(&reports)
        .flat_map(|(&value, report)| {
            report.modes.iter().map(move |m| SweepRow {
                value,
                mode: m.mode,
                max_unitarity_drift: m.max_unitarity_drift,
                observability_defect: m.verdict.generator_observable.value,
            })
        })
        .collect();
    if !base.emit.is_empty() {
        ensure_dir(&base.output_dir)?;
        write_sweep_csv(&base.output_dir, parameter, &rows)?;
    }
    Ok((reports, rows))
}
