use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::AppError;
use crate::error::Result as NumResult;
use crate::evolution::{
    generator_from_propagator, propagate_covariant, propagate_metric_compatible, EvolutionMode,
};
use crate::invariants::{
    generalized_ph_residual, intertwining_residual, theorem_verdict, unitarity_drift,
    TheoremVerdict,
};
use crate::model::{builtin_scenarios, Scenario};
use crate::random::random_scenario_specs;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub tolerance: f64,
}

impl CheckResult {
    fn at_most(name: impl Into<String>, worst: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: worst <= tolerance,
            worst,
            tolerance,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] {} (worst {:.3e}, tolerance {:.1e})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub random_scenarios: usize,
    pub checks: Vec<CheckResult>,
    /// Runs whose verdict has all three flags set.
    pub theorem_violations: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.theorem_violations.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            super::exit::SUCCESS
        } else {
            super::exit::INCONSISTENT
        }
    }
}

fn worst_over(
    scenarios: &[Scenario],
    f: impl Fn(&Scenario) -> NumResult<f64> + Sync,
) -> NumResult<f64> {
    scenarios
        .par_iter()
        .map(&f)
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

/// Runs the invariant suite over the built-ins and the theorem check over the
/// built-ins plus `random_count` seeded random scenarios.
pub fn verify(seed: u64, random_count: usize) -> Result<VerifyReport, AppError> {
    let builtins = builtin_scenarios();
    let mut checks = Vec::new();

    checks.push(CheckResult::at_most(
        "metric-compatible physical-norm drift",
        worst_over(&builtins, |sc| {
            Ok(unitarity_drift(&propagate_metric_compatible(sc)?, sc.metric())?.max_value)
        })?,
        1e-8,
    ));
    checks.push(CheckResult::at_most(
        "metric-compatible intertwining residual",
        worst_over(&builtins, |sc| {
            Ok(intertwining_residual(&propagate_metric_compatible(sc)?, sc.metric())?.max_value)
        })?,
        1e-7,
    ));
    checks.push(CheckResult::at_most(
        "effective generator: closed form vs propagator differences",
        worst_over(&builtins, |sc| {
            let traj = propagate_metric_compatible(sc)?;
            let gens = traj
                .generators
                .as_ref()
                .expect("compatible runs carry generators");
            let mut worst = 0.0f64;
            for (k, g) in gens.iter().enumerate().take(traj.grid.steps()).skip(1) {
                worst = worst.max((&generator_from_propagator(&traj, k)? - g).fro_norm());
            }
            Ok(worst)
        })?,
        5e-4,
    ));
    checks.push(CheckResult::at_most(
        "generalized pseudo-Hermiticity of the effective generator",
        worst_over(&builtins, |sc| {
            let traj = propagate_metric_compatible(sc)?;
            let mut worst = 0.0f64;
            for k in 1..traj.grid.steps() {
                worst = worst.max(generalized_ph_residual(sc, &traj, k)?);
            }
            Ok(worst)
        })?,
        1e-6,
    ));
    checks.push(CheckResult::at_most(
        "covariant vs metric-compatible terminal state",
        worst_over(&builtins, |sc| {
            let a = propagate_covariant(sc)?;
            let b = propagate_metric_compatible(sc)?;
            Ok(a.terminal_state()
                .add_scaled(b.terminal_state(), crate::C64::new(-1.0, 0.0))
                .norm())
        })?,
        1e-7,
    ));

    let mut scenarios = builtins;
    for spec in random_scenario_specs(seed, random_count) {
        scenarios.push(spec.build()?);
    }
    let modes = [EvolutionMode::Naive, EvolutionMode::MetricCompatible];
    let verdicts: Vec<(String, TheoremVerdict)> = scenarios
        .par_iter()
        .flat_map_iter(|sc| modes.iter().map(move |&m| (sc, m)))
        .map(|(sc, mode)| Ok((format!("{}/{mode}", sc.name()), theorem_verdict(sc, mode)?)))
        .collect::<NumResult<_>>()?;
    let theorem_violations: Vec<String> = verdicts
        .iter()
        .filter(|(_, v)| !v.consistent_with_theorem)
        .map(|(name, _)| name.clone())
        .collect();
    checks.push(CheckResult {
        name: format!("theorem verdicts consistent ({} runs)", verdicts.len()),
        passed: theorem_violations.is_empty(),
        worst: theorem_violations.len() as f64,
        tolerance: 0.0,
    });

    Ok(VerifyReport {
        seed,
        random_scenarios: random_count,
        checks,
        theorem_violations,
    })
}
