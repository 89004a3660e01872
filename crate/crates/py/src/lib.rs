//! Python bindings for tdmetric.

use num_complex::Complex64;
use pyo3::exceptions::{PyKeyError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use tdmetric::app::{self, AppError, RunConfig};
use tdmetric::evolution::{self, EvolutionMode};
use tdmetric::invariants;
use tdmetric::model::{builtin_scenario_specs, find_builtin};
use tdmetric::{ComplexMatrix, ComplexVector, ScenarioSpec};

fn num_err(e: tdmetric::Error) -> PyErr {
    PyRuntimeError::new_err(e.to_string())
}

fn app_err(e: AppError) -> PyErr {
    match e {
        AppError::NotFound(_) | AppError::UnknownParameter { .. } => {
            PyKeyError::new_err(e.to_string())
        }
        AppError::Parse { .. } | AppError::Validation(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

/// Hand a serializable value to Python as plain dicts/lists.
fn to_py<T: serde::Serialize>(py: Python<'_>, value: &T) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

fn parse_mode(mode: &str) -> PyResult<EvolutionMode> {
    mode.parse().map_err(|e: String| PyValueError::new_err(e))
}

fn matrix_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.rows()
}

fn vector(v: &ComplexVector) -> Vec<Complex64> {
    v.as_slice().to_vec()
}

/// A validated scenario: Hamiltonian family, metric family, initial state and grid.
#[pyclass(name = "Scenario", module = "pytdmetric", frozen)]
struct PyScenario {
    spec: ScenarioSpec,
    inner: tdmetric::Scenario,
}

impl PyScenario {
    fn from_spec(spec: ScenarioSpec) -> PyResult<Self> {
        let inner = spec.build().map_err(num_err)?;
        Ok(Self { spec, inner })
    }
}

#[pymethods]
impl PyScenario {
    /// Load a built-in scenario by name.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        let spec = find_builtin(name)
            .ok_or_else(|| PyKeyError::new_err(format!("unknown scenario `{name}`")))?;
        Self::from_spec(spec)
    }

    /// Build a scenario from its JSON description (same schema as inline config scenarios).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec: ScenarioSpec =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Self::from_spec(spec)
    }

    /// Copy with a different grid.
    #[pyo3(signature = (steps, t0=None, t1=None))]
    fn with_grid(&self, steps: usize, t0: Option<f64>, t1: Option<f64>) -> PyResult<Self> {
        let mut spec = self.spec.clone();
        spec.grid.steps = steps;
        if let Some(t0) = t0 {
            spec.grid.t0 = t0;
        }
        if let Some(t1) = t1 {
            spec.grid.t1 = t1;
        }
        Self::from_spec(spec)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.spec.dim()
    }

    #[getter]
    fn hbar(&self) -> f64 {
        self.inner.hbar()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.spec).map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    fn hamiltonian(&self, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_rows(
            &self.inner.hamiltonian().value_at(t).map_err(num_err)?,
        ))
    }

    fn metric(&self, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_rows(
            &self.inner.metric().theta_at(t).map_err(num_err)?,
        ))
    }

    /// H′ = H − iħ ω⁻¹ ω̇.
    fn effective_hamiltonian(&self, t: f64) -> PyResult<Vec<Vec<Complex64>>> {
        Ok(matrix_rows(
            &evolution::effective_hamiltonian(&self.inner, t).map_err(num_err)?,
        ))
    }

    /// Propagate in the given mode; returns times, states and physical-norm drift.
    #[pyo3(signature = (mode="metric_compatible"))]
    fn propagate(&self, py: Python<'_>, mode: &str) -> PyResult<Py<PyAny>> {
        let traj = evolution::propagate(&self.inner, parse_mode(mode)?).map_err(num_err)?;
        let drift = invariants::unitarity_drift(&traj, self.inner.metric()).map_err(num_err)?;
        let out = pyo3::types::PyDict::new(py);
        out.set_item("mode", traj.mode.as_str())?;
        out.set_item("times", traj.grid.times().collect::<Vec<_>>())?;
        out.set_item("states", traj.states.iter().map(vector).collect::<Vec<_>>())?;
        out.set_item("unitarity_drift", drift.values)?;
        Ok(out.into_any().unbind())
    }

    #[pyo3(signature = (mode="metric_compatible"))]
    fn theorem_verdict(&self, py: Python<'_>, mode: &str) -> PyResult<Py<PyAny>> {
        let verdict =
            invariants::theorem_verdict(&self.inner, parse_mode(mode)?).map_err(num_err)?;
        to_py(py, &verdict)
    }

    fn __repr__(&self) -> String {
        format!(
            "Scenario(name={:?}, dim={})",
            self.inner.name(),
            self.spec.dim()
        )
    }
}

/// Names of the built-in scenarios.
#[pyfunction]
fn list_scenarios() -> Vec<String> {
    builtin_scenario_specs()
        .into_iter()
        .map(|s| s.name)
        .collect()
}

/// ≺x,y≻ = ⟨x|Θy⟩.
#[pyfunction]
fn physical_inner_product(
    x: Vec<Complex64>,
    y: Vec<Complex64>,
    theta: Vec<Vec<Complex64>>,
) -> PyResult<Complex64> {
    let theta = ComplexMatrix::from_rows(&theta).map_err(num_err)?;
    let x = ComplexVector::new(x).map_err(num_err)?;
    let y = ComplexVector::new(y).map_err(num_err)?;
    if x.dim() != theta.dim() || y.dim() != theta.dim() {
        return Err(PyValueError::new_err("vector and metric dimensions differ"));
    }
    Ok(invariants::physical_inner_product(&x, &y, &theta))
}

/// Run a configuration given as JSON text; returns the report as a dict.
#[pyfunction]
fn run_config(py: Python<'_>, config_json: &str) -> PyResult<Py<PyAny>> {
    let config: RunConfig = app::parse_config(config_json).map_err(app_err)?;
    let report = py.detach(|| app::run(&config)).map_err(app_err)?;
    to_py(py, &report)
}

/// The self-check battery over built-ins and `random_count` seeded random scenarios.
#[pyfunction]
#[pyo3(signature = (seed=0, random_count=50))]
fn verify(py: Python<'_>, seed: u64, random_count: usize) -> PyResult<Py<PyAny>> {
    let report = py
        .detach(|| app::verify(seed, random_count))
        .map_err(app_err)?;
    to_py(py, &report)
}

#[pymodule]
fn pytdmetric(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyScenario>()?;
    m.add_function(wrap_pyfunction!(list_scenarios, m)?)?;
    m.add_function(wrap_pyfunction!(physical_inner_product, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
