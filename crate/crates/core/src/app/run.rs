use std::time::Instant;

use super::config::{Emit, RunConfig, ScenarioRef};
use super::output::{ensure_dir, write_report_json, write_trajectory_csv};
use super::report::{ModeReport, RunReport, SCHEMA_VERSION, TOOL_VERSION};
use super::AppError;
use crate::evolution::propagate;
use crate::invariants::{
    generalized_ph_residual, intertwining_residual, unitarity_drift, verdict_for_trajectory,
};
use crate::model::{find_builtin, ScenarioSpec};
use crate::random::random_scenario_spec;

/// Resolves the configured scenario: a built-in name, `random:<index>` (drawn
/// from the config seed), or an inline definition. The grid override applies last.
pub fn resolve_scenario(config: &RunConfig) -> Result<ScenarioSpec, AppError> {
    let mut spec = match &config.scenario {
        ScenarioRef::Inline(spec) => (**spec).clone(),
        ScenarioRef::Named(name) => match name.strip_prefix("random:") {
            Some(index) => {
                let index = index
                    .parse()
                    .map_err(|_| AppError::NotFound(name.clone()))?;
                random_scenario_spec(config.seed, index)
            }
            None => find_builtin(name).ok_or_else(|| AppError::NotFound(name.clone()))?,
        },
    };
    if let Some(grid) = config.grid {
        spec.grid = grid;
    }
    Ok(spec)
}

pub fn run(config: &RunConfig) -> Result<RunReport, AppError> {
    run_with_timer(config, Instant::now)
}

/// [`run`] with an injectable clock, so tests can pin the runtime field.
pub fn run_with_timer(
    config: &RunConfig,
    now: impl Fn() -> Instant,
) -> Result<RunReport, AppError> {
    let started = now();
    config.validate()?;
    let spec = resolve_scenario(config)?;
    let scenario = spec.build()?;
    if !config.emit.is_empty() {
        ensure_dir(&config.output_dir)?;
    }

    let mut modes = Vec::with_capacity(config.modes.len());
    for &mode in &config.modes {
        let traj = propagate(&scenario, mode)?;
        let metric = scenario.metric();
        let max_intertwining_residual = match traj.propagators {
            Some(_) => Some(intertwining_residual(&traj, metric)?.max_value),
            None => None,
        };
        let mut max_gph = 0.0f64;
        for k in 0..=traj.grid.steps() {
            max_gph = max_gph.max(generalized_ph_residual(&scenario, &traj, k)?);
        }
        let report = ModeReport {
            mode,
            terminal_time: traj.grid.t1(),
            terminal_state: traj.terminal_state().clone(),
            max_unitarity_drift: unitarity_drift(&traj, metric)?.max_value,
            max_intertwining_residual,
            max_generalized_ph_residual: max_gph,
            verdict: verdict_for_trajectory(&scenario, &traj)?,
        };
        if config.emit.contains(&Emit::Csv) {
            write_trajectory_csv(&config.output_dir, &scenario, &traj)?;
        }
        modes.push(report);
    }

    let all_consistent = modes.iter().all(|m| m.verdict.consistent_with_theorem);
    let mut report = RunReport {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        seed: config.seed,
        scenario: spec,
        modes,
        all_consistent,
        runtime_ms: 0.0,
    };
    report.runtime_ms = now().duration_since(started).as_secs_f64() * 1e3;
    if config.emit.contains(&Emit::Json) {
        write_report_json(&config.output_dir, &report)?;
    }
    Ok(report)
}
