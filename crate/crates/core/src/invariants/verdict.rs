use serde::{Deserialize, Serialize};

use super::{observability_defect, unitarity_drift};
use crate::error::Result;
use crate::evolution::{
    generator_from_propagator, generator_from_propagator_o4, propagate, EvolutionMode, Trajectory,
};
use crate::model::Scenario;
use crate::tolerances::{OBSERVABLE_THRESHOLD, TIME_DEPENDENCE_THRESHOLD, UNITARY_THRESHOLD};

/// A boolean together with the measurement that decided it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub holds: bool,
    pub value: f64,
    pub threshold: f64,
}

/// Whether a run exhibits a time-dependent metric, a unitary evolution, and an
/// observable generator all at once. The three cannot hold together.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremVerdict {
    /// `max_t ‖∂tΘ(t)‖_F > 1e-6`.
    pub metric_time_dependent: Witness,
    /// Maximum relative physical-norm drift `≤ 1e-6`.
    pub evolution_unitary: Witness,
    /// Maximum Θ-pseudo-Hermiticity defect of the generator `≤ 1e-6`.
    pub generator_observable: Witness,
    pub consistent_with_theorem: bool,
}

impl TheoremVerdict {
    pub fn from_witnesses(time_dependence: f64, drift: f64, defect: f64) -> Self {
        let metric_time_dependent = Witness {
            holds: time_dependence > TIME_DEPENDENCE_THRESHOLD,
            value: time_dependence,
            threshold: TIME_DEPENDENCE_THRESHOLD,
        };
        let evolution_unitary = Witness {
            holds: drift <= UNITARY_THRESHOLD,
            value: drift,
            threshold: UNITARY_THRESHOLD,
        };
        let generator_observable = Witness {
            holds: defect <= OBSERVABLE_THRESHOLD,
            value: defect,
            threshold: OBSERVABLE_THRESHOLD,
        };
        let consistent_with_theorem =
            !(metric_time_dependent.holds && evolution_unitary.holds && generator_observable.holds);
        Self {
            metric_time_dependent,
            evolution_unitary,
            generator_observable,
            consistent_with_theorem,
        }
    }

    /// `(time-dependent, unitary, observable)`.
    pub fn flags(&self) -> (bool, bool, bool) {
        (
            self.metric_time_dependent.holds,
            self.evolution_unitary.holds,
            self.generator_observable.holds,
        )
    }
}

/// Maximum observability defect of the generator that drove `traj`.
///
/// Propagator runs use the five-point difference generator (plain central
/// differences leave ~1e-7 noise, too close to the threshold); covariant runs
/// carry no propagator, so their integrated generator is used.
fn max_generator_defect(scenario: &Scenario, traj: &Trajectory) -> Result<f64> {
    let metric = scenario.metric();
    let steps = traj.grid.steps();
    let mut worst = 0.0f64;
    if traj.propagators.is_some() && steps >= 4 {
        for k in 2..=steps - 2 {
            let g = generator_from_propagator_o4(traj, k)?;
            worst = worst.max(observability_defect(
                &g,
                &metric.theta_at(traj.grid.time(k))?,
            )?);
        }
    } else if traj.propagators.is_some() && steps >= 2 {
        for k in 1..steps {
            let g = generator_from_propagator(traj, k)?;
            worst = worst.max(observability_defect(
                &g,
                &metric.theta_at(traj.grid.time(k))?,
            )?);
        }
    } else if let Some(gens) = &traj.generators {
        for (g, t) in gens.iter().zip(traj.grid.times()) {
            worst = worst.max(observability_defect(g, &metric.theta_at(t)?)?);
        }
    }
    Ok(worst)
}

pub fn verdict_for_trajectory(scenario: &Scenario, traj: &Trajectory) -> Result<TheoremVerdict> {
    let metric = scenario.metric();
    let mut time_dependence = 0.0f64;
    for t in traj.grid.times() {
        time_dependence = time_dependence.max(metric.theta_dot_at(t)?.fro_norm());
    }
    let drift = unitarity_drift(traj, metric)?.max_value;
    let defect = max_generator_defect(scenario, traj)?;
    let verdict = TheoremVerdict::from_witnesses(time_dependence, drift, defect);
    debug_assert_eq!(
        verdict.consistent_with_theorem,
        !(verdict.metric_time_dependent.holds
            && verdict.evolution_unitary.holds
            && verdict.generator_observable.holds)
    );
    Ok(verdict)
}

/// Runs `mode` on `scenario` and classifies the outcome.
pub fn theorem_verdict(scenario: &Scenario, mode: EvolutionMode) -> Result<TheoremVerdict> {
    let traj = propagate(scenario, mode)?;
    verdict_for_trajectory(scenario, &traj)
}
