//! Serializable scenario descriptions.
//!
//! Operator families are closures and cannot be serialized, so a scenario is
//! described by named builders plus their parameters and assembled on demand.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::family::{MetricFamily, OperatorFamily};
use super::scenario::{build_quasi_hermitian, Scenario};
use crate::error::{Error, Result};
use crate::evolution::TimeGrid;
use crate::invariants::physical_inner_product;
use crate::linalg::{ComplexMatrix, ComplexVector, C64};

/// Hermitian physical-frame Hamiltonian `h(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum FrameSpec {
    Constant {
        matrix: ComplexMatrix,
    },
    /// `h(t) = offset + t·slope`.
    Linear {
        offset: ComplexMatrix,
        slope: ComplexMatrix,
    },
}

/// Metric `Θ(t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "builder", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricSpec {
    Constant {
        matrix: ComplexMatrix,
    },
    /// `Θ(t) = diag(1, e^{2αt}, e^{4αt}, …)`.
    DiagGrowth {
        alpha: f64,
    },
    /// `Θ(t) = R(βt)·diag(1, μ)·R(βt)†` with `R` a plane rotation; two-dimensional only.
    Rotating {
        beta: f64,
        mu: f64,
    },
    /// `Θ(t) = B(t)†B(t) + I` with `B(t) = Σ_k B_k t^k`.
    PolynomialGram {
        coefficients: Vec<ComplexMatrix>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t0: f64,
    pub t1: f64,
    pub steps: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            t0: 0.0,
            t1: 1.0,
            steps: 1000,
        }
    }
}

impl GridSpec {
    pub fn to_grid(self) -> Result<TimeGrid> {
        TimeGrid::new(self.t0, self.t1, self.steps)
    }
}

fn default_hbar() -> f64 {
    1.0
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    pub frame: FrameSpec,
    pub metric: MetricSpec,
    /// Normalized to unit physical norm at `t0`; defaults to `(1, 1, …)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_state: Option<ComplexVector>,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default, skip_serializing_if = "is_false")]
    pub naive_demo: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("unknown parameter `{name}` for scenario `{scenario}` (available: {available:?})")]
pub struct UnknownParameter {
    pub name: String,
    pub scenario: String,
    pub available: Vec<&'static str>,
}

impl ScenarioSpec {
    pub fn dim(&self) -> usize {
        match &self.frame {
            FrameSpec::Constant { matrix } => matrix.dim(),
            FrameSpec::Linear { offset, .. } => offset.dim(),
        }
    }

    /// Scalar parameters that [`Self::set_parameter`] accepts.
    pub fn parameters(&self) -> Vec<&'static str> {
        let mut names = vec!["hbar", "t1"];
        match self.metric {
            MetricSpec::DiagGrowth { .. } => names.push("alpha"),
            MetricSpec::Rotating { .. } => names.extend(["beta", "mu"]),
            _ => {}
        }
        names
    }

    pub fn set_parameter(
        &mut self,
        name: &str,
        value: f64,
    ) -> std::result::Result<(), UnknownParameter> {
        match (name, &mut self.metric) {
            ("hbar", _) => self.hbar = value,
            ("t1", _) => self.grid.t1 = value,
            ("alpha", MetricSpec::DiagGrowth { alpha }) => *alpha = value,
            ("beta", MetricSpec::Rotating { beta, .. }) => *beta = value,
            ("mu", MetricSpec::Rotating { mu, .. }) => *mu = value,
            _ => {
                return Err(UnknownParameter {
                    name: name.to_string(),
                    scenario: self.name.clone(),
                    available: self.parameters(),
                })
            }
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Scenario> {
        let grid = self.grid.to_grid()?;
        let frame = self.frame_family()?;
        let metric = Arc::new(self.metric_family(frame.dim())?);
        let hamiltonian = build_quasi_hermitian(&frame, &metric, grid.t0())?;

        let n = frame.dim();
        let raw = match &self.initial_state {
            Some(v) => v.clone(),
            None => ComplexVector::from_real(&vec![1.0; n])?,
        };
        if raw.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: raw.dim(),
            });
        }
        let theta0 = metric.theta_at(grid.t0())?;
        let norm = physical_inner_product(&raw, &raw, &theta0).re;
        if !(norm > crate::tolerances::ZERO_NORM_FLOOR) {
            return Err(Error::ZeroInitialNorm);
        }
        let state = raw.scale(C64::new(1.0 / norm.sqrt(), 0.0));

        Ok(Scenario::new(
            self.name.clone(),
            self.hbar,
            hamiltonian,
            metric,
            state,
            grid,
        )?
        .with_frame(frame)
        .with_naive_demo(self.naive_demo))
    }

    fn frame_family(&self) -> Result<OperatorFamily> {
        Ok(match &self.frame {
            FrameSpec::Constant { matrix } => OperatorFamily::constant(matrix.clone()),
            FrameSpec::Linear { offset, slope } => {
                if slope.dim() != offset.dim() {
                    return Err(Error::DimensionMismatch {
                        expected: offset.dim(),
                        found: slope.dim(),
                    });
                }
                let (o, s) = (offset.clone(), slope.clone());
                let ds = slope.clone();
                OperatorFamily::from_fn(o.dim(), move |t| Ok(o.add_scaled(&s, C64::new(t, 0.0))))
                    .with_derivative(move |_| Ok(ds.clone()))
            }
        })
    }

    fn metric_family(&self, n: usize) -> Result<MetricFamily> {
        Ok(match &self.metric {
            MetricSpec::Constant { matrix } => {
                if matrix.dim() != n {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: matrix.dim(),
                    });
                }
                MetricFamily::constant(matrix.clone())
            }
            &MetricSpec::DiagGrowth { alpha } => diag_growth(n, alpha),
            &MetricSpec::Rotating { beta, mu } => {
                if n != 2 {
                    return Err(Error::InvalidScenario(format!(
                        "rotating metric is two-dimensional, frame has dimension {n}"
                    )));
                }
                if !(mu > 0.0) {
                    return Err(Error::InvalidScenario(format!(
                        "rotating metric needs mu > 0, got {mu}"
                    )));
                }
                rotating(beta, mu)
            }
            MetricSpec::PolynomialGram { coefficients } => {
                if coefficients.is_empty() {
                    return Err(Error::InvalidScenario(
                        "polynomial_gram needs at least one coefficient".into(),
                    ));
                }
                if let Some(bad) = coefficients.iter().find(|c| c.dim() != n) {
                    return Err(Error::DimensionMismatch {
                        expected: n,
                        found: bad.dim(),
                    });
                }
                polynomial_gram(coefficients.clone())
            }
        })
    }
}

fn diag_growth(n: usize, alpha: f64) -> MetricFamily {
    let rates: Vec<f64> = (0..n).map(|k| alpha * k as f64).collect();
    let r1 = rates.clone();
    let r2 = rates.clone();
    let theta = OperatorFamily::from_fn(n, move |t| {
        Ok(ComplexMatrix::from_real_diag(
            &r1.iter().map(|r| (2.0 * r * t).exp()).collect::<Vec<_>>(),
        ))
    })
    .with_derivative(move |t| {
        Ok(ComplexMatrix::from_real_diag(
            &r2.iter()
                .map(|r| 2.0 * r * (2.0 * r * t).exp())
                .collect::<Vec<_>>(),
        ))
    });
    MetricFamily::new(theta).with_analytic_omega_dot(move |t| {
        Ok(ComplexMatrix::from_real_diag(
            &rates.iter().map(|r| r * (r * t).exp()).collect::<Vec<_>>(),
        ))
    })
}

fn rotation(angle: f64) -> ComplexMatrix {
    let (s, c) = angle.sin_cos();
    ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]]).expect("2x2")
}

/// d/dθ of [`rotation`].
fn rotation_rate(angle: f64) -> ComplexMatrix {
    let (s, c) = angle.sin_cos();
    ComplexMatrix::from_real_rows(&[&[-s, -c], &[c, -s]]).expect("2x2")
}

/// `R D Rᵀ` and its time derivative for a fixed diagonal `D`.
fn rotated_diag(
    beta: f64,
    diag: [f64; 2],
) -> (impl Fn(f64) -> ComplexMatrix, impl Fn(f64) -> ComplexMatrix) {
    let d = ComplexMatrix::from_real_diag(&diag);
    let d2 = d.clone();
    let value = move |t: f64| {
        let r = rotation(beta * t);
        &(&r * &d) * &r.adjoint()
    };
    let rate = move |t: f64| {
        let r = rotation(beta * t);
        let dr = rotation_rate(beta * t).scale_real(beta);
        &(&(&dr * &d2) * &r.adjoint()) + &(&(&r * &d2) * &dr.adjoint())
    };
    (value, rate)
}

fn rotating(beta: f64, mu: f64) -> MetricFamily {
    let (theta, theta_dot) = rotated_diag(beta, [1.0, mu]);
    let (_, omega_dot) = rotated_diag(beta, [1.0, mu.sqrt()]);
    MetricFamily::new(
        OperatorFamily::from_fn(2, move |t| Ok(theta(t)))
            .with_derivative(move |t| Ok(theta_dot(t))),
    )
    .with_analytic_omega_dot(move |t| Ok(omega_dot(t)))
}

fn polynomial_gram(coefficients: Vec<ComplexMatrix>) -> MetricFamily {
    let n = coefficients[0].dim();
    let coefficients = Arc::new(coefficients);
    let eval = {
        let c = Arc::clone(&coefficients);
        move |t: f64| -> (ComplexMatrix, ComplexMatrix) {
            // Horner for B(t) and B'(t) together.
            let mut b = ComplexMatrix::zeros(n);
            let mut db = ComplexMatrix::zeros(n);
            let tc = C64::new(t, 0.0);
            for k in (0..c.len()).rev() {
                db = &db.scale(tc) + &b;
                b = &b.scale(tc) + &c[k];
            }
            (b, db)
        }
    };
    let eval2 = eval.clone();
    let theta = OperatorFamily::from_fn(n, move |t| {
        let (b, _) = eval(t);
        Ok(&(&b.adjoint() * &b) + &ComplexMatrix::identity(n))
    })
    .with_derivative(move |t| {
        let (b, db) = eval2(t);
        Ok(&(&db.adjoint() * &b) + &(&b.adjoint() * &db))
    });
    MetricFamily::new(theta)
}
