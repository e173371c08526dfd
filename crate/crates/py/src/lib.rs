//! Python bindings. Reports come back as plain dicts and lists, exactly the
//! JSON the command-line tool prints.

use hitchin_cubic::adjoint::{verify_chevalley, InvariantSet};
use hitchin_cubic::cubic::{cubic_report, cubic_root_sum, CubicForm};
use hitchin_cubic::harness::{verify as run_verify, verify_suite, VerificationConfig, SUITE_STEP};
use hitchin_cubic::periods::{period_matrix, PeriodReport};
use hitchin_cubic::rootsys::{build_root_system, lie_check as run_lie_check, CartanType};
use hitchin_cubic::spectral::{self, leaf_basis, CurveSpec, Divisor};
use hitchin_cubic::{Error, Poly};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyModule;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::SymmetryFail(_)
        | Error::PositivityFail(_)
        | Error::NonConvergence(_)
        | Error::QuadratureStall { .. }
        | Error::IllConditioned(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Accepts a dict or a JSON string.
fn from_py<T: DeserializeOwned>(obj: &Bound<'_, PyAny>) -> PyResult<T> {
    let text: String = if let Ok(s) = obj.extract::<String>() {
        s
    } else {
        let json = PyModule::import(obj.py(), "json")?;
        json.call_method1("dumps", (obj,))?.extract()?
    };
    serde_json::from_str(&text).map_err(json_err)
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(json_err)?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

fn cartan(name: &str) -> PyResult<CartanType> {
    name.parse::<CartanType>().map_err(to_py_err)
}

#[pyfunction]
fn lie_check<'py>(py: Python<'py>, type_name: &str) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &run_lie_check(cartan(type_name)?).map_err(to_py_err)?)
}

#[pyfunction]
#[pyo3(signature = (type_name, samples=100, seed=0))]
fn adjoint_check<'py>(py: Python<'py>, type_name: &str, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let rs = build_root_system(cartan(type_name)?).map_err(to_py_err)?;
    let inv = InvariantSet::new(&rs).map_err(to_py_err)?;
    let rep = py.detach(|| verify_chevalley(&inv, &rs, samples, seed)).map_err(to_py_err)?;
    to_py(py, &rep)
}

#[pyfunction]
fn curve_info<'py>(py: Python<'py>, spec: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let spec: CurveSpec = from_py(spec)?;
    to_py(py, &spectral::curve_info(&spec).map_err(to_py_err)?)
}

#[pyfunction]
#[pyo3(signature = (spec, form="both"))]
fn cubic<'py>(py: Python<'py>, spec: &Bound<'py, PyAny>, form: &str) -> PyResult<Bound<'py, PyAny>> {
    let form = match form.to_ascii_lowercase().as_str() {
        "a" => CubicForm::A,
        "b" => CubicForm::B,
        "both" => CubicForm::Both,
        other => return Err(PyValueError::new_err(format!("form must be A, B or both, got {other}"))),
    };
    let curve = from_py::<CurveSpec>(spec)?.build().map_err(to_py_err)?;
    to_py(py, &cubic_report(&curve, form).map_err(to_py_err)?)
}

#[pyfunction]
fn periods<'py>(py: Python<'py>, spec: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let curve = from_py::<CurveSpec>(spec)?.build().map_err(to_py_err)?;
    let pd = py.detach(|| period_matrix(&curve)).map_err(to_py_err)?;
    to_py(py, &PeriodReport::from(&pd))
}

/// Runs the period-derivative check; `suite_points > 1` in the config runs suite mode.
#[pyfunction]
fn verify<'py>(py: Python<'py>, config: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let cfg: VerificationConfig = from_py(config)?;
    match cfg.suite_points {
        Some(n) if n > 1 => {
            let rep = py.detach(|| verify_suite(&cfg, n, SUITE_STEP)).map_err(to_py_err)?;
            to_py(py, &rep)
        }
        _ => {
            let rep = py.detach(|| run_verify(&cfg)).map_err(to_py_err)?;
            to_py(py, &rep)
        }
    }
}

/// A generic spectral curve `y² = b(z)` over a divisor `D`.
#[pyclass(name = "SpectralCurve", module = "hitchin_cubic_py", frozen)]
struct PySpectralCurve {
    inner: spectral::SpectralCurve,
}

#[pymethods]
impl PySpectralCurve {
    /// `points` and `multiplicities` describe `D`; `b_coeffs` run from the constant term up.
    #[new]
    #[pyo3(signature = (points, b_coeffs, multiplicities=None))]
    fn new(points: Vec<Complex64>, b_coeffs: Vec<Complex64>, multiplicities: Option<Vec<u32>>) -> PyResult<Self> {
        let mult = multiplicities.unwrap_or_else(|| vec![1; points.len()]);
        let divisor = Divisor::new(points, mult).map_err(to_py_err)?;
        let inner = spectral::make_curve(&divisor, Poly::new(b_coeffs)).map_err(to_py_err)?;
        Ok(PySpectralCurve { inner })
    }

    #[staticmethod]
    fn from_spec(spec: &Bound<'_, PyAny>) -> PyResult<Self> {
        let spec: CurveSpec = from_py(spec)?;
        Ok(PySpectralCurve { inner: spec.build().map_err(to_py_err)? })
    }

    #[getter]
    fn genus(&self) -> usize {
        self.inner.genus()
    }

    #[getter]
    fn branch_points(&self) -> Vec<Complex64> {
        self.inner.branch_points().to_vec()
    }

    fn to_spec<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &CurveSpec::from_curve(&self.inner))
    }

    /// Cubic tensor in the leaf basis `zⁱ`, as nested lists of complex numbers.
    fn cubic(&self) -> PyResult<Vec<Vec<Vec<Complex64>>>> {
        let basis = leaf_basis(self.inner.divisor());
        let t = cubic_root_sum(&self.inner, &basis).map_err(to_py_err)?;
        let n = basis.len();
        Ok((0..n).map(|i| (0..n).map(|j| (0..n).map(|k| t.get(i, j, k)).collect()).collect()).collect())
    }

    fn period_matrix(&self, py: Python<'_>) -> PyResult<Vec<Vec<Complex64>>> {
        let pd = py.detach(|| period_matrix(&self.inner)).map_err(to_py_err)?;
        let g = pd.z.nrows();
        Ok((0..g).map(|r| (0..g).map(|c| pd.z[(r, c)]).collect()).collect())
    }

    fn __repr__(&self) -> String {
        format!("SpectralCurve(genus={}, deg_b={})", self.inner.genus(), 2 * self.inner.d())
    }
}

#[pymodule]
fn hitchin_cubic_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(lie_check, m)?)?;
    m.add_function(wrap_pyfunction!(adjoint_check, m)?)?;
    m.add_function(wrap_pyfunction!(curve_info, m)?)?;
    m.add_function(wrap_pyfunction!(cubic, m)?)?;
    m.add_function(wrap_pyfunction!(periods, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_class::<PySpectralCurve>()?;
    Ok(())
}
