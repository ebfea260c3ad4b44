use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: for<'py> FnOnce(Python<'py>, &Bound<'py, PyDict>)>(f: F) {
    Python::attach(|py| {
        let module = pyo3::wrap_pymodule!(phasefront_py::phasefront_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("pf", module).unwrap();
        f(py, &globals);
    });
}

fn eval<'py>(py: Python<'py>, globals: &Bound<'py, PyDict>, expr: &str) -> Bound<'py, PyAny> {
    let code = std::ffi::CString::new(expr).unwrap();
    py.eval(&code, Some(globals), None).unwrap()
}

#[test]
fn classes_and_solvers() {
    with_module(|py, g| {
        let d2: f64 = eval(py, g, "pf.PhasePair(0.0, 1.0, 1.0, 3.0).delta2").extract().unwrap();
        assert!((d2 - 1.0).abs() < 1e-15);
        let residual: f64 = eval(py, g, "pf.solve_lax(pf.State(1.0, 0.0), pf.State(3.0, -0.4), 1.0, 1.0)['max_residual']").extract().unwrap();
        assert!(residual < 1e-12);
        let k: f64 = eval(py, g, "pf.k_threshold(1.0)").extract().unwrap();
        assert!((k - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-12);
        let s: f64 = eval(py, g, "pf.solve_pseudo_simplified(0.0, 1, -0.1, pf.PhasePair(0.0, 1.0, 1.0, 3.0))").extract().unwrap();
        assert!((s - 2.0 * 2.0 * (-0.1f64).sinh()).abs() < 1e-15);
    });
}

#[test]
fn errors_become_value_errors() {
    with_module(|py, g| {
        let code = std::ffi::CString::new("pf.State(-1.0, 0.0)").unwrap();
        let err = py.eval(&code, Some(g), None).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(py));
        let code = std::ffi::CString::new("pf.run_config('not toml [')").unwrap();
        assert!(py.eval(&code, Some(g), None).unwrap_err().is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
