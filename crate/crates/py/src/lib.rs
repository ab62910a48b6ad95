//! Python bindings. Structured results (reports, certificates, sweep and
//! search results) come back as plain dicts and lists.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use superquad::bounds::{evaluate as evaluate_bound, TheoremId, TheoremParams};
use superquad::functions::{FunctionClass, FunctionModel, DEFAULT_GRID};
use superquad::harness::{self, write_report, ReportFormat, SearchConfig, SearchFamily, SweepSpec};
use superquad::sequences::{Sequence, SequenceSpec};
use superquad::{averages, refinements, Summation};

fn err(e: superquad::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Serialises through JSON into Python builtins.
fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

fn sequence(values: Vec<f64>) -> PyResult<Sequence> {
    Sequence::new(values).map_err(err)
}

fn parse<T: std::str::FromStr<Err = superquad::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

/// A real function on `[0, L]` with its class flags.
#[pyclass(
    name = "FunctionModel",
    module = "superquad_py",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyFunctionModel {
    inner: FunctionModel,
}

#[pymethods]
impl PyFunctionModel {
    /// Builds a catalog function from a spec such as `pow:2` or `xlog3`.
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(PyFunctionModel {
            inner: FunctionModel::from_spec(spec).map_err(err)?,
        })
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn domain_end(&self) -> f64 {
        self.inner.domain_end()
    }

    /// Names of the class flags the function carries.
    #[getter]
    fn classes(&self) -> Vec<&'static str> {
        FunctionClass::ALL
            .iter()
            .filter(|&&c| self.inner.has_class(c))
            .map(|c| c.as_str())
            .collect()
    }

    fn has_class(&self, class: &str) -> PyResult<bool> {
        Ok(self.inner.has_class(parse(class)?))
    }

    fn __call__(&self, x: f64) -> PyResult<f64> {
        self.inner.eval(x).map_err(err)
    }

    fn derivative(&self, x: f64) -> Option<f64> {
        self.inner.derivative(x)
    }

    fn negate(&self) -> Self {
        PyFunctionModel {
            inner: self.inner.negate(),
        }
    }

    fn __repr__(&self) -> String {
        format!("FunctionModel('{}')", self.inner.name())
    }
}

#[pyfunction]
fn catalog() -> Vec<PyFunctionModel> {
    superquad::catalog()
        .into_iter()
        .map(|inner| PyFunctionModel { inner })
        .collect()
}

#[pyfunction]
#[pyo3(signature = (f, class_name, grid_size = DEFAULT_GRID))]
fn certify<'py>(
    py: Python<'py>,
    f: &PyFunctionModel,
    class_name: &str,
    grid_size: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let cert = superquad::certify(&f.inner, parse(class_name)?, grid_size).map_err(err)?;
    to_py(py, &cert)
}

/// Terms `a_1..a_len` of a sequence spec such as `geom:1,1.5`.
#[pyfunction]
#[pyo3(signature = (spec, length, seed = harness::DEFAULT_SEED))]
fn generate_sequence(spec: &str, length: usize, seed: u64) -> PyResult<Vec<f64>> {
    let spec: SequenceSpec = parse(spec)?;
    let s = spec.generate_seeded(length, seed).map_err(err)?;
    Ok(s.values().to_vec())
}

#[pyfunction]
fn avg_a(f: &PyFunctionModel, n: usize) -> PyResult<f64> {
    Ok(averages::avg_a(&f.inner, n).map_err(err)?.value)
}

#[pyfunction]
fn avg_b(f: &PyFunctionModel, n: usize) -> PyResult<f64> {
    Ok(averages::avg_b(&f.inner, n).map_err(err)?.value)
}

/// `(1/weight)·Σ_{r≤n} f(a_r/denom)`.
#[pyfunction]
fn avg_general(
    f: &PyFunctionModel,
    a: Vec<f64>,
    denom: f64,
    weight: f64,
    n: usize,
) -> PyResult<f64> {
    let a = sequence(a)?;
    Ok(averages::avg_general(&f.inner, &a, denom, weight, n)
        .map_err(err)?
        .value)
}

#[pyfunction]
fn jensen_refinement<'py>(
    py: Python<'py>,
    f: &PyFunctionModel,
    weights: Vec<f64>,
    points: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &refinements::jensen_refinement(&f.inner, &weights, &points).map_err(err)?,
    )
}

#[pyfunction]
fn lemma1_chain<'py>(
    py: Python<'py>,
    f: &PyFunctionModel,
    x: f64,
    y: f64,
    lam: f64,
    t: usize,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &refinements::lemma1_chain(&f.inner, x, y, lam, t).map_err(err)?,
    )
}

#[pyfunction]
#[pyo3(signature = (f, lams, a_vals, t, use_common_a = true))]
fn lemma2_bound<'py>(
    py: Python<'py>,
    f: &PyFunctionModel,
    lams: Vec<f64>,
    a_vals: Vec<f64>,
    t: usize,
    use_common_a: bool,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &refinements::lemma2_bound(&f.inner, &lams, &a_vals, t, use_common_a).map_err(err)?,
    )
}

#[pyfunction]
fn lemma3_bound<'py>(
    py: Python<'py>,
    f: &PyFunctionModel,
    weights: Vec<f64>,
    points: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    to_py(
        py,
        &refinements::lemma3_bound(&f.inner, &weights, &points).map_err(err)?,
    )
}

/// Both sides of a bound. `sequences` holds one list of terms per sequence
/// the theorem takes, each starting at index 1.
#[pyfunction]
#[pyo3(signature = (theorem, f, n, sequences = Vec::new(), t = None, exact = false))]
fn evaluate<'py>(
    py: Python<'py>,
    theorem: &str,
    f: &PyFunctionModel,
    n: usize,
    sequences: Vec<Vec<f64>>,
    t: Option<usize>,
    exact: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let theorem: TheoremId = parse(theorem)?;
    let seqs = sequences
        .into_iter()
        .map(sequence)
        .collect::<PyResult<Vec<_>>>()?;
    let mut params = TheoremParams::new(n);
    params.t = t;
    if exact {
        params = params.with_summation(Summation::Exact);
    }
    let report = evaluate_bound(theorem, &f.inner, &seqs, params).map_err(err)?;
    let status = report.status(superquad::bounds::DEFAULT_TOLERANCE);
    let out = to_py(py, &report)?;
    out.set_item("status", status.as_str())?;
    Ok(out)
}

fn sweep_spec(
    theorems: Vec<String>,
    functions: Vec<String>,
    sequences: Vec<String>,
    n_range: (usize, usize),
    t_values: Vec<usize>,
    seed: Option<u64>,
    tolerance: f64,
) -> PyResult<SweepSpec> {
    Ok(SweepSpec {
        theorem_ids: theorems.iter().map(|s| parse(s)).collect::<PyResult<_>>()?,
        function_specs: functions,
        sequence_specs: sequences
            .iter()
            .map(|s| parse(s))
            .collect::<PyResult<_>>()?,
        n_range: n_range.0..=n_range.1,
        t_values,
        seed: match seed {
            Some(s) => s,
            None => harness::seed_from_env().map_err(err)?,
        },
        tolerance,
        parallel: true,
    })
}

/// Runs a sweep. Returns the result dict with an added `exit_code`, and the
/// CSV report text under `csv`.
#[pyfunction]
#[pyo3(signature = (theorems, functions, sequences = Vec::new(), n_range = (2, 100), t_values = vec![2], seed = None, tolerance = superquad::bounds::DEFAULT_TOLERANCE))]
#[allow(clippy::too_many_arguments)]
fn run_sweep<'py>(
    py: Python<'py>,
    theorems: Vec<String>,
    functions: Vec<String>,
    sequences: Vec<String>,
    n_range: (usize, usize),
    t_values: Vec<usize>,
    seed: Option<u64>,
    tolerance: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let spec = sweep_spec(
        theorems, functions, sequences, n_range, t_values, seed, tolerance,
    )?;
    let result = py.detach(|| harness::run_sweep(&spec)).map_err(err)?;
    let mut csv = Vec::new();
    write_report(&result.rows, ReportFormat::Csv, &mut csv)
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let out = to_py(py, &result)?;
    out.set_item("exit_code", result.exit_code())?;
    out.set_item("csv", String::from_utf8_lossy(&csv).into_owned())?;
    Ok(out)
}

#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (theorem, f, seed = harness::DEFAULT_SEED, restarts = 10, budget = 5000, families = None, n_max = 100))]
fn minimize_margin<'py>(
    py: Python<'py>,
    theorem: &str,
    f: &PyFunctionModel,
    seed: u64,
    restarts: usize,
    budget: usize,
    families: Option<Vec<String>>,
    n_max: usize,
) -> PyResult<Bound<'py, PyAny>> {
    let theorem: TheoremId = parse(theorem)?;
    let mut cfg = SearchConfig {
        seed,
        restarts,
        budget,
        n_max,
        ..SearchConfig::default()
    };
    if let Some(fams) = families {
        cfg.families = fams
            .iter()
            .map(|s| parse::<SearchFamily>(s))
            .collect::<PyResult<_>>()?;
    }
    let result = py
        .detach(|| harness::minimize_margin_with(theorem, &f.inner, &cfg))
        .map_err(err)?;
    to_py(py, &result)
}

#[pyfunction]
fn theorem_ids() -> Vec<&'static str> {
    TheoremId::ALL.iter().map(|t| t.as_str()).collect()
}

#[pymodule]
fn superquad_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyFunctionModel>()?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(generate_sequence, m)?)?;
    m.add_function(wrap_pyfunction!(avg_a, m)?)?;
    m.add_function(wrap_pyfunction!(avg_b, m)?)?;
    m.add_function(wrap_pyfunction!(avg_general, m)?)?;
    m.add_function(wrap_pyfunction!(jensen_refinement, m)?)?;
    m.add_function(wrap_pyfunction!(lemma1_chain, m)?)?;
    m.add_function(wrap_pyfunction!(lemma2_bound, m)?)?;
    m.add_function(wrap_pyfunction!(lemma3_bound, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(theorem_ids, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(minimize_margin, m)?)?;
    m.add("DEFAULT_TOLERANCE", superquad::bounds::DEFAULT_TOLERANCE)?;
    m.add("DEFAULT_SEED", harness::DEFAULT_SEED)?;
    Ok(())
}
