//! The three evolution laws on a uniform time grid, and two routes to the
//! effective generator `H′`.

mod rk4;

pub use rk4::{rk4_matrix_ode, rk4_state_ode};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inverse, ComplexMatrix, ComplexVector, C64, I};
use crate::model::Scenario;
use crate::tolerances::FRAME_HERMITIAN_TOL;

/// Uniform grid `t_k = t0 + k·(t1 − t0)/N`, `k = 0..=N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    t0: f64,
    t1: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, t1: f64, steps: usize) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "non-finite endpoints ({t0}, {t1})"
            )));
        }
        if !(t1 > t0) {
            return Err(Error::InvalidGrid(format!(
                "t1 = {t1} must exceed t0 = {t0}"
            )));
        }
        if steps == 0 {
            return Err(Error::InvalidGrid("steps must be at least 1".into()));
        }
        Ok(Self { t0, t1, steps })
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn t1(&self) -> f64 {
        self.t1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        (self.t1 - self.t0) / self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k == self.steps {
            return self.t1;
        }
        self.t0 + (self.t1 - self.t0) * (k as f64 / self.steps as f64)
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.steps).map(move |k| self.time(k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolutionMode {
    /// `iħ∂tU = H U`.
    Naive,
    /// `U = ω(t)⁻¹ u(t) ω(t0)` with `iħ∂tu = h u`, `h = ωHω⁻¹`.
    MetricCompatible,
    /// `iħ D_tΦ = HΦ` with `D_t = ∂t + ω⁻¹∂tω`, integrated on the state.
    Covariant,
}

impl EvolutionMode {
    pub const ALL: [EvolutionMode; 3] = [Self::Naive, Self::MetricCompatible, Self::Covariant];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Naive => "naive",
            Self::MetricCompatible => "metric_compatible",
            Self::Covariant => "covariant",
        }
    }
}

impl fmt::Display for EvolutionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EvolutionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!("unknown mode `{s}` (expected naive, metric_compatible or covariant)")
            })
    }
}

/// Sampled evolution on a grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub mode: EvolutionMode,
    pub hbar: f64,
    /// `U(t_k)`; absent for covariant runs.
    pub propagators: Option<Vec<ComplexMatrix>>,
    pub states: Vec<ComplexVector>,
    /// Generator of the evolution that actually ran, evaluated on the grid.
    pub generators: Option<Vec<ComplexMatrix>>,
}

impl Trajectory {
    pub fn terminal_state(&self) -> &ComplexVector {
        self.states.last().expect("at least two samples")
    }

    pub fn propagators(&self) -> Result<&[ComplexMatrix]> {
        self.propagators.as_deref().ok_or(Error::MissingPropagators)
    }
}

fn states_from(propagators: &[ComplexMatrix], initial: &ComplexVector) -> Vec<ComplexVector> {
    let mut states: Vec<ComplexVector> = propagators.iter().map(|u| u.mul_vec(initial)).collect();
    states[0] = initial.clone();
    states
}

fn samples<T>(grid: &TimeGrid, f: impl Fn(f64) -> Result<T>) -> Result<Vec<T>> {
    grid.times().map(f).collect()
}

/// Integrates `iħ∂tU = H(t)U`, `U(t0) = I`, and pushes the initial state through it.
pub fn propagate_naive(scenario: &Scenario) -> Result<Trajectory> {
    let grid = *scenario.grid();
    let inv_hbar = 1.0 / scenario.hbar();
    let h = scenario.hamiltonian();
    let propagators = rk4_matrix_ode(|t| Ok(h.value_at(t)?.scale_real(inv_hbar)), &grid)?;
    let states = states_from(&propagators, scenario.initial_state());
    let generators = samples(&grid, |t| h.value_at(t))?;
    Ok(Trajectory {
        grid,
        mode: EvolutionMode::Naive,
        hbar: scenario.hbar(),
        propagators: Some(propagators),
        states,
        generators: Some(generators),
    })
}

/// `h(t) = ω H ω⁻¹`, checked for Hermiticity.
pub fn frame_hamiltonian(scenario: &Scenario, t: f64) -> Result<ComplexMatrix> {
    let omega = scenario.metric().omega_at(t)?;
    let h = &(&omega * &scenario.hamiltonian().value_at(t)?) * &inverse(&omega)?;
    let residual = h.hermitian_residual();
    if residual > FRAME_HERMITIAN_TOL {
        return Err(Error::FrameNotHermitian { t, residual });
    }
    Ok(h)
}

/// `U_R(t) = ω(t)⁻¹ u(t) ω(t0)` where `u` evolves under the Hermitian frame Hamiltonian.
pub fn propagate_metric_compatible(scenario: &Scenario) -> Result<Trajectory> {
    let grid = *scenario.grid();
    let inv_hbar = 1.0 / scenario.hbar();
    let frame = rk4_matrix_ode(
        |t| Ok(frame_hamiltonian(scenario, t)?.scale_real(inv_hbar)),
        &grid,
    )?;
    let metric = scenario.metric();
    let omega0 = metric.omega_at(grid.t0())?;
    let propagators = frame
        .iter()
        .zip(grid.times())
        .map(|(u, t)| Ok(&(&inverse(&metric.omega_at(t)?)? * u) * &omega0))
        .collect::<Result<Vec<_>>>()?;
    let states = states_from(&propagators, scenario.initial_state());
    let generators = samples(&grid, |t| effective_hamiltonian(scenario, t))?;
    Ok(Trajectory {
        grid,
        mode: EvolutionMode::MetricCompatible,
        hbar: scenario.hbar(),
        propagators: Some(propagators),
        states,
        generators: Some(generators),
    })
}

/// `H′(t) = H(t) − iħ ω(t)⁻¹ ∂tω(t)`.
pub fn effective_hamiltonian(scenario: &Scenario, t: f64) -> Result<ComplexMatrix> {
    let metric = scenario.metric();
    let connection = &inverse(&metric.omega_at(t)?)? * &metric.omega_dot_at(t)?;
    Ok(scenario
        .hamiltonian()
        .value_at(t)?
        .add_scaled(&connection, -I * scenario.hbar()))
}

/// `iħ·[U(t_{k+1}) − U(t_{k−1})]/(2Δt)·U(t_k)⁻¹` for an interior index `k`.
pub fn generator_from_propagator(traj: &Trajectory, k: usize) -> Result<ComplexMatrix> {
    let steps = traj.grid.steps();
    if k == 0 || k >= steps {
        return Err(Error::NotInterior { k, steps });
    }
    let u = traj.propagators()?;
    let rate = (&u[k + 1] - &u[k - 1]).scale_real(0.5 / traj.grid.dt());
    Ok((&rate * &inverse(&u[k])?).scale(I * traj.hbar))
}

/// Fourth-order variant of [`generator_from_propagator`] using the five-point
/// stencil; needs `2 ≤ k ≤ N−2`.
pub fn generator_from_propagator_o4(traj: &Trajectory, k: usize) -> Result<ComplexMatrix> {
    let steps = traj.grid.steps();
    if k < 2 || k + 2 > steps {
        return Err(Error::NotInterior { k, steps });
    }
    let u = traj.propagators()?;
    let rate = (&(&u[k - 2] - &u[k + 2]) + &(&u[k + 1] - &u[k - 1]).scale_real(8.0))
        .scale_real(1.0 / (12.0 * traj.grid.dt()));
    Ok((&rate * &inverse(&u[k])?).scale(I * traj.hbar))
}

/// Integrates `∂tΦ = [−iH/ħ − ω⁻¹∂tω]Φ` directly on the state.
pub fn propagate_covariant(scenario: &Scenario) -> Result<Trajectory> {
    let grid = *scenario.grid();
    let hbar = scenario.hbar();
    let rate = |t: f64| -> Result<ComplexMatrix> {
        // −i H′/ħ, which expands to −iH/ħ − ω⁻¹∂tω.
        Ok(effective_hamiltonian(scenario, t)?.scale(C64::new(0.0, -1.0 / hbar)))
    };
    let states = rk4_state_ode(rate, scenario.initial_state().clone(), &grid)?;
    let generators = samples(&grid, |t| effective_hamiltonian(scenario, t))?;
    Ok(Trajectory {
        grid,
        mode: EvolutionMode::Covariant,
        hbar,
        propagators: None,
        states,
        generators: Some(generators),
    })
}

pub fn propagate(scenario: &Scenario, mode: EvolutionMode) -> Result<Trajectory> {
    match mode {
        EvolutionMode::Naive => propagate_naive(scenario),
        EvolutionMode::MetricCompatible => propagate_metric_compatible(scenario),
        EvolutionMode::Covariant => propagate_covariant(scenario),
    }
}

#[cfg(test)]
mod tests;
