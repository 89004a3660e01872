use std::sync::Arc;

use super::family::{MetricFamily, OperatorFamily};
use crate::error::{Error, Result};
use crate::evolution::TimeGrid;
use crate::invariants::physical_inner_product;
use crate::linalg::{inverse, ComplexMatrix, ComplexVector};
use crate::tolerances::{HERMITIAN_INPUT_TOL, SCENARIO_PH_TOL, ZERO_NORM_FLOOR};

/// `‖A† − ΘAΘ⁻¹‖_F / max(1, ‖A‖_F)`.
pub fn pseudo_hermiticity_residual(a: &ComplexMatrix, theta: &ComplexMatrix) -> Result<f64> {
    let conjugated = &(theta * a) * &inverse(theta)?;
    Ok((&a.adjoint() - &conjugated).fro_norm() / a.fro_norm().max(1.0))
}

/// `H(t) = ω(t)⁻¹ h(t) ω(t)` for a Hermitian frame Hamiltonian `h`.
///
/// The frame is checked for Hermiticity at `t_check` up front and again on
/// every evaluation of the returned family.
pub fn build_quasi_hermitian(
    h_frame: &OperatorFamily,
    metric: &Arc<MetricFamily>,
    t_check: f64,
) -> Result<OperatorFamily> {
    if h_frame.dim() != metric.dim() {
        return Err(Error::DimensionMismatch {
            expected: metric.dim(),
            found: h_frame.dim(),
        });
    }
    let checked = |h: &ComplexMatrix| -> Result<()> {
        let residual = h.hermitian_residual();
        if residual > HERMITIAN_INPUT_TOL {
            return Err(Error::NotHermitian { residual });
        }
        Ok(())
    };
    checked(&h_frame.value_at(t_check)?)?;
    let frame = h_frame.clone();
    let metric = Arc::clone(metric);
    Ok(OperatorFamily::from_fn(frame.dim(), move |t| {
        let h = frame.value_at(t)?;
        checked(&h)?;
        let omega = metric.omega_at(t)?;
        Ok(&(&inverse(&omega)? * &h) * &omega)
    }))
}

/// A fully assembled quasi-Hermitian system ready for propagation.
#[derive(Clone, Debug)]
pub struct Scenario {
    name: String,
    hbar: f64,
    hamiltonian: OperatorFamily,
    frame: Option<OperatorFamily>,
    metric: Arc<MetricFamily>,
    initial_state: ComplexVector,
    grid: TimeGrid,
    naive_demo: bool,
}

impl Scenario {
    /// Validates dimensions, the initial physical norm, and Θ-pseudo-Hermiticity
    /// of `H(t0)`.
    pub fn new(
        name: impl Into<String>,
        hbar: f64,
        hamiltonian: OperatorFamily,
        metric: Arc<MetricFamily>,
        initial_state: ComplexVector,
        grid: TimeGrid,
    ) -> Result<Self> {
        let n = metric.dim();
        for found in [hamiltonian.dim(), initial_state.dim()] {
            if found != n {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        let theta0 = metric.theta_at(grid.t0())?;
        let h0 = hamiltonian.value_at(grid.t0())?;
        let defect = pseudo_hermiticity_residual(&h0, &theta0)?;
        if defect > SCENARIO_PH_TOL {
            return Err(Error::InvalidScenario(format!(
                "Hamiltonian is not Θ-pseudo-Hermitian at t0 (residual {defect:.3e})"
            )));
        }
        // Positive-definiteness of Θ(t0) is enforced by the root.
        metric.omega_at(grid.t0())?;
        let norm = physical_inner_product(&initial_state, &initial_state, &theta0).re;
        if !(norm > ZERO_NORM_FLOOR) {
            return Err(Error::ZeroInitialNorm);
        }
        Ok(Self {
            name: name.into(),
            hbar,
            hamiltonian,
            frame: None,
            metric,
            initial_state,
            grid,
            naive_demo: false,
        })
    }

    pub fn with_frame(mut self, frame: OperatorFamily) -> Self {
        self.frame = Some(frame);
        self
    }

    pub fn with_naive_demo(mut self, flag: bool) -> Self {
        self.naive_demo = flag;
        self
    }

    pub fn with_grid(mut self, grid: TimeGrid) -> Self {
        self.grid = grid;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn hamiltonian(&self) -> &OperatorFamily {
        &self.hamiltonian
    }

    /// The Hermitian `h(t)` the Hamiltonian was built from, when known.
    pub fn frame(&self) -> Option<&OperatorFamily> {
        self.frame.as_ref()
    }

    pub fn metric(&self) -> &Arc<MetricFamily> {
        &self.metric
    }

    pub fn initial_state(&self) -> &ComplexVector {
        &self.initial_state
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn naive_demo(&self) -> bool {
        self.naive_demo
    }
}
