//! Python module `phasefront_py`.
//!
//! Structured results (fans, parameter sets, run summaries, sweep reports)
//! come back as plain dicts.

use phasefront::config::Config;
use phasefront::eos::{self, Family};
use phasefront::tracker::{run_scheme, MonitorMode};
use phasefront::{oracle, params, riemann, Error};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain { .. } | Error::PhaseSide { .. } | Error::Config(_) | Error::InvalidData(_) | Error::Infeasible { .. } => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_py<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn family(i: u8) -> PyResult<Family> {
    Family::from_index(i).ok_or_else(|| PyValueError::new_err(format!("family must be 1 or 3, got {i}")))
}

#[pyclass(name = "State", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyState(eos::State);

#[pymethods]
impl PyState {
    #[new]
    #[pyo3(signature = (v, u, lam = 0.0))]
    fn new(v: f64, u: f64, lam: f64) -> PyResult<Self> {
        eos::State::new(v, u, lam).map(PyState).map_err(py_err)
    }

    #[getter]
    fn v(&self) -> f64 {
        self.0.v
    }

    #[getter]
    fn u(&self) -> f64 {
        self.0.u
    }

    #[getter]
    fn lam(&self) -> f64 {
        self.0.lam
    }

    fn __repr__(&self) -> String {
        format!("State(v={}, u={}, lam={})", self.0.v, self.0.u, self.0.lam)
    }
}

#[pyclass(name = "PhasePair", frozen, from_py_object)]
#[derive(Clone, Copy)]
struct PyPhasePair(eos::PhasePair);

#[pymethods]
impl PyPhasePair {
    #[new]
    fn new(lam_l: f64, lam_r: f64, a_l: f64, a_r: f64) -> PyResult<Self> {
        eos::PhasePair::new(lam_l, lam_r, a_l, a_r).map(PyPhasePair).map_err(py_err)
    }

    #[getter]
    fn delta2(&self) -> f64 {
        self.0.delta2
    }

    #[getter]
    fn a_l(&self) -> f64 {
        self.0.a_l
    }

    #[getter]
    fn a_r(&self) -> f64 {
        self.0.a_r
    }

    fn __repr__(&self) -> String {
        let p = &self.0;
        format!("PhasePair(lam_l={}, lam_r={}, a_l={}, a_r={}, delta2={})", p.lam_l, p.lam_r, p.a_l, p.a_r, p.delta2)
    }
}

#[pyfunction]
fn pressure(v: f64, a: f64) -> PyResult<f64> {
    eos::pressure(v, a).map_err(py_err)
}

#[pyfunction]
fn h(eps: f64) -> f64 {
    eos::h(eps)
}

#[pyfunction]
fn c_damp(z: f64) -> f64 {
    eos::c_damp(z)
}

#[pyfunction]
fn apply_wave(state: PyState, family_index: u8, eps: f64, a: f64) -> PyResult<PyState> {
    Ok(PyState(eos::apply_wave(state.0, family(family_index)?, eps, a)))
}

#[pyfunction]
fn k_threshold(r: f64) -> PyResult<f64> {
    params::k_threshold(r).map_err(py_err)
}

fn fan_dict<'py>(py: Python<'py>, fan: &riemann::RiemannFan) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("eps1", fan.eps1)?;
    d.set_item("eps2", fan.eps2)?;
    d.set_item("eps3", fan.eps3)?;
    d.set_item("mid_left", PyState(fan.mid_left))?;
    d.set_item("mid_right", PyState(fan.mid_right))?;
    d.set_item("max_residual", fan.max_residual())?;
    Ok(d)
}

#[pyfunction]
fn solve_lax<'py>(py: Python<'py>, left: PyState, right: PyState, a_l: f64, a_r: f64) -> PyResult<Bound<'py, PyDict>> {
    let fan = riemann::solve_lax(left.0, right.0, a_l, a_r).map_err(py_err)?;
    fan_dict(py, &fan)
}

#[pyfunction]
fn solve_pseudo_accurate<'py>(py: Python<'py>, left: PyState, right: PyState, d20: f64, phases: PyPhasePair) -> PyResult<Bound<'py, PyDict>> {
    let fan = riemann::solve_pseudo_accurate(left.0, right.0, d20, &phases.0).map_err(py_err)?;
    fan_dict(py, &fan)
}

#[pyfunction]
fn solve_pseudo_simplified(d20: f64, family_index: u8, delta: f64, phases: PyPhasePair) -> PyResult<f64> {
    Ok(riemann::solve_pseudo_simplified(d20, family(family_index)?, delta, &phases.0))
}

#[pyfunction]
fn choose_parameters<'py>(py: Python<'py>, phases: PyPhasePair, tv_budget: f64) -> PyResult<Bound<'py, PyAny>> {
    let set = params::choose_parameters(&phases.0, tv_budget).map_err(py_err)?;
    to_py(py, &set)
}

#[pyfunction]
fn reflected_size(alpha: f64, beta: f64) -> f64 {
    oracle::reflected_size(alpha, beta)
}

/// Runs the sweeps of one oracle suite.
#[pyfunction]
#[pyo3(signature = (suite, grid = 50))]
fn verify<'py>(py: Python<'py>, suite: &str, grid: usize) -> PyResult<Bound<'py, PyAny>> {
    let reports = py.detach(|| oracle::run_suite(suite, grid)).map_err(py_err)?;
    to_py(py, &reports)
}

/// Runs a TOML configuration and returns the run statistics, the chosen
/// parameters and the functional time series.
#[pyfunction]
#[pyo3(signature = (config, force = false))]
fn run_config<'py>(py: Python<'py>, config: &str, force: bool) -> PyResult<Bound<'py, PyAny>> {
    let cfg = Config::from_toml_str(config).map_err(py_err)?;
    let monitor = if force { MonitorMode::Warn } else { MonitorMode::Strict };
    let prep = cfg.prepare(monitor).map_err(py_err)?;
    let set = match (prep.params.clone(), prep.admissibility.admissible) {
        (Ok(p), true) => p,
        _ if force => params::ParameterSet::best_effort(&prep.phases, prep.admissibility.combined),
        _ => return Err(PyValueError::new_err(format!("inadmissible data (margin {})", prep.admissibility.margin))),
    };
    let outcome = py.detach(|| run_scheme(&prep.profile, &prep.phases, &set, &prep.settings)).map_err(py_err)?;
    let summary = serde_json::json!({
        "admissibility": prep.admissibility,
        "parameters": set,
        "eta": outcome.eta,
        "rho": outcome.rho,
        "stats": outcome.trajectory.stats,
        "violations": outcome.trajectory.violations.len(),
        "functionals": outcome.trajectory.snapshots,
    });
    to_py(py, &summary)
}

#[pymodule]
pub fn phasefront_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyState>()?;
    m.add_class::<PyPhasePair>()?;
    m.add_function(wrap_pyfunction!(pressure, m)?)?;
    m.add_function(wrap_pyfunction!(h, m)?)?;
    m.add_function(wrap_pyfunction!(c_damp, m)?)?;
    m.add_function(wrap_pyfunction!(apply_wave, m)?)?;
    m.add_function(wrap_pyfunction!(k_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(solve_lax, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pseudo_accurate, m)?)?;
    m.add_function(wrap_pyfunction!(solve_pseudo_simplified, m)?)?;
    m.add_function(wrap_pyfunction!(choose_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(reflected_size, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_index_is_validated() {
        assert!(family(1).is_ok());
        assert!(family(3).is_ok());
        assert!(family(2).is_err());
    }

    #[test]
    fn scalar_wrappers_match_core() {
        assert_eq!(h(-0.5), eos::h(-0.5));
        assert_eq!(c_damp(0.7), eos::c_damp(0.7));
    }
}
