//! Residual measurements for the unitarity, intertwining, and pseudo-Hermiticity
//! identities, and the automated verdict on observability versus unitarity.

mod verdict;

pub use verdict::{theorem_verdict, verdict_for_trajectory, TheoremVerdict, Witness};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{generator_from_propagator, Trajectory};
use crate::linalg::{inverse, ComplexMatrix, ComplexVector, C64, I};
use crate::model::{pseudo_hermiticity_residual, MetricFamily, Scenario};
use crate::tolerances::ZERO_NORM_FLOOR;

/// `≺x, y≻ = ⟨x|Θy⟩`.
pub fn physical_inner_product(x: &ComplexVector, y: &ComplexVector, theta: &ComplexMatrix) -> C64 {
    x.dot(&theta.mul_vec(y))
}

/// A residual sampled on the grid of a trajectory.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub max_value: f64,
    pub argmax_time: f64,
}

impl ResidualSeries {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        debug_assert_eq!(times.len(), values.len());
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::NonFinite("residual series"));
        }
        let (argmax, max_value) =
            values
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
                    if v > best.1 {
                        (i, v)
                    } else {
                        best
                    }
                });
        let argmax_time = times.get(argmax).copied().unwrap_or(f64::NAN);
        Ok(Self {
            times,
            values,
            max_value,
            argmax_time,
        })
    }
}

fn theta_samples(traj: &Trajectory, metric: &MetricFamily) -> Result<Vec<ComplexMatrix>> {
    traj.grid.times().map(|t| metric.theta_at(t)).collect()
}

/// Relative drift of the physical norm `≺Φ(t),Φ(t)≻_{Θ(t)}` from its initial value.
pub fn unitarity_drift(traj: &Trajectory, metric: &MetricFamily) -> Result<ResidualSeries> {
    let thetas = theta_samples(traj, metric)?;
    let initial = physical_inner_product(&traj.states[0], &traj.states[0], &thetas[0]).re;
    if !(initial.abs() > ZERO_NORM_FLOOR) {
        return Err(Error::ZeroInitialNorm);
    }
    let values = traj
        .states
        .iter()
        .zip(&thetas)
        .map(|(phi, theta)| (physical_inner_product(phi, phi, theta).re - initial).abs() / initial)
        .collect();
    ResidualSeries::new(traj.grid.times().collect(), values)
}

/// `‖U(t)†Θ(t)U(t) − Θ(t0)‖_F / ‖Θ(t0)‖_F` along the trajectory.
pub fn intertwining_residual(traj: &Trajectory, metric: &MetricFamily) -> Result<ResidualSeries> {
    let propagators = traj.propagators()?;
    let thetas = theta_samples(traj, metric)?;
    let theta0 = &thetas[0];
    let scale = theta0.fro_norm();
    let values = propagators
        .iter()
        .zip(&thetas)
        .map(|(u, theta)| (&(&(&u.adjoint() * theta) * u) - theta0).fro_norm() / scale)
        .collect();
    ResidualSeries::new(traj.grid.times().collect(), values)
}

/// Defect of `H′† = ΘH′Θ⁻¹ + iħ(∂tΘ)Θ⁻¹`, normalized by `max(1, ‖H′‖_F)`.
pub fn generalized_ph_defect(
    h_prime: &ComplexMatrix,
    theta: &ComplexMatrix,
    theta_dot: &ComplexMatrix,
    hbar: f64,
) -> Result<f64> {
    let theta_inv = inverse(theta)?;
    let rhs = (&(theta * h_prime) * &theta_inv).add_scaled(&(theta_dot * &theta_inv), I * hbar);
    Ok((&h_prime.adjoint() - &rhs).fro_norm() / h_prime.fro_norm().max(1.0))
}

/// The generator a trajectory carries at `k`, falling back to extraction from
/// its propagator.
pub fn trajectory_generator(traj: &Trajectory, k: usize) -> Result<ComplexMatrix> {
    match &traj.generators {
        Some(g) => Ok(g[k].clone()),
        None => generator_from_propagator(traj, k),
    }
}

/// Generalized pseudo-Hermiticity residual of the trajectory's generator at grid index `k`.
pub fn generalized_ph_residual(scenario: &Scenario, traj: &Trajectory, k: usize) -> Result<f64> {
    let t = traj.grid.time(k);
    let h_prime = trajectory_generator(traj, k)?;
    let metric = scenario.metric();
    generalized_ph_defect(
        &h_prime,
        &metric.theta_at(t)?,
        &metric.theta_dot_at(t)?,
        scenario.hbar(),
    )
}

/// Θ-pseudo-Hermiticity defect of a generator; zero exactly when it is observable.
pub fn observability_defect(h_prime: &ComplexMatrix, theta: &ComplexMatrix) -> Result<f64> {
    pseudo_hermiticity_residual(h_prime, theta)
}
