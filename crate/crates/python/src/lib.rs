//! Python bindings. Reports and predictions cross over as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyModule;

use braidnomial_core::braid::{self, BraidWord};
use braidnomial_core::equation::{self, build_equation_with, Mode, TrinomialEquation};
use braidnomial_core::galois;
use braidnomial_core::paths::LoopSpec;
use braidnomial_core::predictor;
use braidnomial_core::report::{self, LoopSelection, RunConfig, RunMode};
use braidnomial_core::svg;
use braidnomial_core::tracker::TrackerControls;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    PyModule::import(py, "json")?.call_method1("loads", (text,))
}

#[pyclass(name = "Equation", frozen)]
struct PyEquation {
    inner: TrinomialEquation,
}

#[pymethods]
impl PyEquation {
    /// `Y^n - X^g Y^p + X^r`; gcd violations raise unless `tracker_only`.
    #[new]
    #[pyo3(signature = (n, p, g, r, tracker_only = false))]
    fn new(n: u64, p: u64, g: u64, r: u64, tracker_only: bool) -> PyResult<Self> {
        let mode = if tracker_only { Mode::TrackerOnly } else { Mode::Predictor };
        build_equation_with(n, p, g, r, mode).map(|inner| PyEquation { inner }).map_err(value_error)
    }

    #[getter]
    fn m(&self) -> u64 {
        self.inner.m()
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    #[getter(N)]
    fn big_n(&self) -> u64 {
        self.inner.big_n()
    }

    /// `R` as an exact fraction string.
    #[getter(R)]
    fn big_r(&self) -> String {
        self.inner.big_r().to_string()
    }

    #[getter]
    fn branch_modulus(&self) -> f64 {
        self.inner.branch_modulus()
    }

    #[getter]
    fn predictor_valid(&self) -> bool {
        self.inner.predictor_valid()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings().iter().map(|w| w.to_string()).collect()
    }

    fn coincidence_pair(&self, ell: i64) -> PyResult<(u64, u64)> {
        equation::coincidence_pair(&self.inner, ell).map_err(value_error)
    }

    /// Prediction for one loop (`zero`, `sigma`, `infinity`, `omega:<l>`,
    /// `composite:a;b`) as a dict.
    fn predict<'py>(&self, py: Python<'py>, loop_name: &str) -> PyResult<Bound<'py, PyAny>> {
        let spec = LoopSpec::parse(loop_name).map_err(value_error)?;
        let p = predictor::predict(&self.inner, &spec).map_err(value_error)?;
        to_py(py, &p)
    }

    fn __repr__(&self) -> String {
        format!("Equation({})", self.inner.tag())
    }
}

#[pyclass(name = "BraidWord", frozen)]
struct PyBraidWord {
    inner: BraidWord,
}

#[pymethods]
impl PyBraidWord {
    #[new]
    fn new(strands: usize, letters: Vec<i32>) -> PyResult<Self> {
        BraidWord::new(strands, letters).map(|inner| PyBraidWord { inner }).map_err(value_error)
    }

    #[getter]
    fn strands(&self) -> usize {
        self.inner.strands()
    }

    #[getter]
    fn letters(&self) -> Vec<i32> {
        self.inner.letters().to_vec()
    }

    fn exponent_sum(&self) -> i64 {
        self.inner.exponent_sum()
    }

    fn permutation(&self) -> Vec<usize> {
        self.inner.permutation()
    }

    /// Reduced Burau matrix, entries as Laurent polynomial strings in `t`.
    fn burau(&self) -> Vec<Vec<String>> {
        self.inner.burau().rows()
    }

    fn inverse(&self) -> Self {
        PyBraidWord { inner: self.inner.inverse() }
    }

    fn then(&self, other: &PyBraidWord) -> PyResult<Self> {
        self.inner.then(&other.inner).map(|inner| PyBraidWord { inner }).map_err(value_error)
    }

    /// Equal permutation, exponent sum and Burau matrix.
    fn same_element(&self, other: &PyBraidWord) -> PyResult<bool> {
        braid::same_element(&self.inner, &other.inner).map(|s| s == braid::Sameness::EqualByInvariants).map_err(value_error)
    }

    #[pyo3(signature = (labels = None, title = ""))]
    fn svg(&self, labels: Option<Vec<String>>, title: &str) -> String {
        svg::render_braid(&self.inner, &labels.unwrap_or_default(), title)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("BraidWord({}, {:?})", self.inner.strands(), self.inner.letters())
    }
}

/// Order of the permutation group generated by `generators`, as an int.
#[pyfunction]
fn group_order<'py>(py: Python<'py>, degree: usize, generators: Vec<Vec<usize>>) -> PyResult<Bound<'py, PyAny>> {
    let order = galois::group_order(degree, &generators).map_err(value_error)?;
    py.import("builtins")?.getattr("int")?.call1((order.to_string(),))
}

/// Run one of the command-line modes and return the report as a dict.
#[pyfunction]
#[pyo3(signature = (equation, loop_name = "all", mode = "verify", tracker_only = false, delta = None, tol = 1e-10, terms = 40, cache = None))]
#[allow(clippy::too_many_arguments)]
fn run<'py>(
    py: Python<'py>,
    equation: (u64, u64, u64, u64),
    loop_name: &str,
    mode: &str,
    tracker_only: bool,
    delta: Option<f64>,
    tol: f64,
    terms: usize,
    cache: Option<String>,
) -> PyResult<Bound<'py, PyAny>> {
    let mode = match mode {
        "predict" => RunMode::Predict,
        "verify" => RunMode::Verify,
        "galois" => RunMode::Galois,
        "diagram" => RunMode::Diagram,
        other => return Err(PyValueError::new_err(format!("unknown mode {other}"))),
    };
    let loops = LoopSelection::parse(loop_name).map_err(value_error)?;
    let mut cfg = RunConfig::new(equation, loops, mode);
    cfg.tracker_only = tracker_only;
    cfg.delta = delta;
    cfg.controls = TrackerControls { tolerance: tol, ..TrackerControls::default() };
    cfg.terms = terms;
    cfg.cache = cache.map(Into::into);
    let outcome = py.detach(|| report::run(&cfg));
    to_py(py, &outcome.report)
}

#[pymodule]
fn braidnomial_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyEquation>()?;
    m.add_class::<PyBraidWord>()?;
    m.add_function(wrap_pyfunction!(group_order, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add("REPORT_SCHEMA", report::REPORT_SCHEMA)?;
    Ok(())
}
