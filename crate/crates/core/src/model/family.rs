use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use crate::error::Result;
use crate::linalg::{sqrt_pd, ComplexMatrix};
use crate::tolerances::{FAMILY_DIFF_STEP, OMEGA_CACHE_CAPACITY, OMEGA_DIFF_STEP};

pub type MatrixFn = Arc<dyn Fn(f64) -> Result<ComplexMatrix> + Send + Sync>;

/// A map `t ↦ A(t)` together with its time derivative.
#[derive(Clone)]
pub struct OperatorFamily {
    dim: usize,
    value: MatrixFn,
    derivative: Option<MatrixFn>,
}

impl OperatorFamily {
    pub fn new(dim: usize, value: MatrixFn) -> Self {
        Self {
            dim,
            value,
            derivative: None,
        }
    }

    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    {
        Self::new(dim, Arc::new(f))
    }

    pub fn with_derivative<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    {
        self.derivative = Some(Arc::new(f));
        self
    }

    pub fn constant(matrix: ComplexMatrix) -> Self {
        let dim = matrix.dim();
        Self::from_fn(dim, move |_| Ok(matrix.clone()))
            .with_derivative(move |_| Ok(ComplexMatrix::zeros(dim)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn value_at(&self, t: f64) -> Result<ComplexMatrix> {
        (self.value)(t)
    }

    pub fn has_analytic_derivative(&self) -> bool {
        self.derivative.is_some()
    }

    /// Analytic derivative when supplied, otherwise a central difference.
    pub fn derivative_at(&self, t: f64) -> Result<ComplexMatrix> {
        match &self.derivative {
            Some(d) => d(t),
            None => self.central_difference(t, FAMILY_DIFF_STEP),
        }
    }

    pub fn central_difference(&self, t: f64, step: f64) -> Result<ComplexMatrix> {
        let plus = self.value_at(t + step)?;
        let minus = self.value_at(t - step)?;
        Ok((&plus - &minus).scale_real(0.5 / step))
    }
}

impl fmt::Debug for OperatorFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorFamily")
            .field("dim", &self.dim)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

/// Positive metric `Θ(t)` and its canonical factor `ω(t) = Θ(t)^{1/2}`.
///
/// ω values are memoized per time (keyed on the bit pattern of `t`); the table
/// is shared behind a lock so a family can be evaluated from several threads.
pub struct MetricFamily {
    theta: OperatorFamily,
    omega_cache: RwLock<HashMap<u64, ComplexMatrix>>,
    omega_derivative_step: f64,
    omega_dot: Option<MatrixFn>,
}

impl MetricFamily {
    pub fn new(theta: OperatorFamily) -> Self {
        Self {
            theta,
            omega_cache: RwLock::new(HashMap::new()),
            omega_derivative_step: OMEGA_DIFF_STEP,
            omega_dot: None,
        }
    }

    pub fn constant(theta: ComplexMatrix) -> Self {
        let dim = theta.dim();
        Self::new(OperatorFamily::constant(theta))
            .with_analytic_omega_dot(move |_| Ok(ComplexMatrix::zeros(dim)))
    }

    /// Overrides the finite-difference ∂tω.
    pub fn with_analytic_omega_dot<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> Result<ComplexMatrix> + Send + Sync + 'static,
    {
        self.omega_dot = Some(Arc::new(f));
        self
    }

    pub fn with_omega_derivative_step(mut self, step: f64) -> Self {
        self.omega_derivative_step = step;
        self
    }

    pub fn dim(&self) -> usize {
        self.theta.dim()
    }

    pub fn theta(&self) -> &OperatorFamily {
        &self.theta
    }

    pub fn theta_at(&self, t: f64) -> Result<ComplexMatrix> {
        self.theta.value_at(t)
    }

    pub fn theta_dot_at(&self, t: f64) -> Result<ComplexMatrix> {
        self.theta.derivative_at(t)
    }

    pub fn omega_derivative_step(&self) -> f64 {
        self.omega_derivative_step
    }

    pub fn has_analytic_omega_dot(&self) -> bool {
        self.omega_dot.is_some()
    }

    pub fn omega_at(&self, t: f64) -> Result<ComplexMatrix> {
        let key = t.to_bits();
        if let Some(hit) = self
            .omega_cache
            .read()
            .expect("omega cache poisoned")
            .get(&key)
        {
            return Ok(hit.clone());
        }
        let omega = sqrt_pd(&self.theta_at(t)?)?;
        let mut cache = self.omega_cache.write().expect("omega cache poisoned");
        if cache.len() < OMEGA_CACHE_CAPACITY {
            cache.entry(key).or_insert_with(|| omega.clone());
        }
        Ok(omega)
    }

    pub fn omega_dot_at(&self, t: f64) -> Result<ComplexMatrix> {
        match &self.omega_dot {
            Some(f) => f(t),
            None => self.omega_dot_fd(t, self.omega_derivative_step),
        }
    }

    /// Central difference `[ω(t+δ) − ω(t−δ)]/(2δ)`, bypassing any analytic override.
    pub fn omega_dot_fd(&self, t: f64, step: f64) -> Result<ComplexMatrix> {
        let plus = sqrt_pd(&self.theta_at(t + step)?)?;
        let minus = sqrt_pd(&self.theta_at(t - step)?)?;
        Ok((&plus - &minus).scale_real(0.5 / step))
    }

    pub fn cached_omegas(&self) -> usize {
        self.omega_cache.read().expect("omega cache poisoned").len()
    }
}

impl Clone for MetricFamily {
    fn clone(&self) -> Self {
        Self {
            theta: self.theta.clone(),
            omega_cache: RwLock::new(HashMap::new()),
            omega_derivative_step: self.omega_derivative_step,
            omega_dot: self.omega_dot.clone(),
        }
    }
}

impl fmt::Debug for MetricFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricFamily")
            .field("dim", &self.dim())
            .field("omega_derivative_step", &self.omega_derivative_step)
            .field("analytic_omega_dot", &self.omega_dot.is_some())
            .finish()
    }
}

/// `ω(t) = Θ(t)^{1/2}`, the Hermitian positive root.
pub fn omega_of(metric: &MetricFamily, t: f64) -> Result<ComplexMatrix> {
    metric.omega_at(t)
}

/// `∂tω(t)`: analytic when the metric supplies it, else a central difference.
pub fn omega_dot_of(metric: &MetricFamily, t: f64) -> Result<ComplexMatrix> {
    metric.omega_dot_at(t)
}
