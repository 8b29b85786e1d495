//! Python bindings for the sepcrit toolkit: state constructors, the
//! PPT / CCN / LUR criteria, operator Schmidt data, witnesses and
//! threshold scans.

use std::str::FromStr;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use sepcrit::criteria;
use sepcrit::nonlinear_witness;
use sepcrit::scan;
use sepcrit::schmidt_realign;
use sepcrit::states;
use sepcrit::{CMatrix, Tolerances, TOL_DETECT};

fn py_err(err: sepcrit::Error) -> PyErr {
    match err {
        sepcrit::Error::NoConvergence => PyRuntimeError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

type Rows = Vec<Vec<(f64, f64)>>;

fn matrix_to_rows(m: &CMatrix) -> Rows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
        .collect()
}

fn rows_to_matrix(rows: &Rows) -> PyResult<CMatrix> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix rows must form a square array"));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| {
        num_complex::Complex64::new(rows[i][j].0, rows[i][j].1)
    }))
}

/// A validated bipartite density matrix.
#[pyclass(name = "DensityMatrix", frozen)]
struct PyDensityMatrix {
    inner: sepcrit::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    /// DensityMatrix(dim_a, dim_b, matrix) with matrix a nested list of
    /// (re, im) pairs, row-major.
    #[new]
    fn new(dim_a: usize, dim_b: usize, matrix: Rows) -> PyResult<Self> {
        let mat = rows_to_matrix(&matrix)?;
        let inner = sepcrit::DensityMatrix::with_tolerances(
            mat,
            dim_a,
            dim_b,
            &Tolerances::default(),
        )
        .map_err(py_err)?;
        Ok(PyDensityMatrix { inner })
    }

    #[getter]
    fn dim_a(&self) -> usize {
        self.inner.dim_a()
    }

    #[getter]
    fn dim_b(&self) -> usize {
        self.inner.dim_b()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    /// The matrix as a nested list of (re, im) pairs.
    fn matrix(&self) -> Rows {
        matrix_to_rows(self.inner.mat())
    }

    fn __repr__(&self) -> String {
        format!(
            "DensityMatrix(dim_a={}, dim_b={}, purity={:.6})",
            self.inner.dim_a(),
            self.inner.dim_b(),
            self.inner.purity()
        )
    }
}

/// Outcome of one criterion evaluation.
#[pyclass(name = "CriterionReport", frozen)]
struct PyCriterionReport {
    #[pyo3(get)]
    criterion: String,
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    detected: bool,
    #[pyo3(get)]
    details: std::collections::BTreeMap<String, f64>,
}

impl PyCriterionReport {
    fn from_report(r: criteria::CriterionReport) -> Self {
        PyCriterionReport {
            criterion: r.criterion.to_string(),
            value: r.value,
            detected: r.detected,
            details: r.details.into_iter().collect(),
        }
    }
}

#[pymethods]
impl PyCriterionReport {
    fn __repr__(&self) -> String {
        format!(
            "CriterionReport(criterion='{}', value={}, detected={})",
            self.criterion, self.value, self.detected
        )
    }
}

/// Result of a bisection threshold scan.
#[pyclass(name = "ScanResult", frozen)]
struct PyScanResult {
    #[pyo3(get)]
    family: String,
    #[pyo3(get)]
    criterion: String,
    #[pyo3(get)]
    threshold: f64,
    #[pyo3(get)]
    bracket: (f64, f64),
    #[pyo3(get)]
    tolerance: f64,
    #[pyo3(get)]
    evaluations: usize,
    #[pyo3(get)]
    monotonicity_warning: bool,
}

#[pymethods]
impl PyScanResult {
    fn __repr__(&self) -> String {
        format!(
            "ScanResult(family='{}', criterion='{}', threshold={:.6})",
            self.family, self.criterion, self.threshold
        )
    }
}

#[pyfunction]
fn singlet() -> PyDensityMatrix {
    PyDensityMatrix {
        inner: states::singlet(),
    }
}

#[pyfunction]
fn noisy_singlet(p: f64) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: states::noisy_singlet(p).map_err(py_err)?,
    })
}

#[pyfunction]
fn tiles_rho_be() -> PyDensityMatrix {
    PyDensityMatrix {
        inner: states::tiles_rho_be(),
    }
}

#[pyfunction]
fn tiles_state(p: f64) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: states::tiles_state(p).map_err(py_err)?,
    })
}

#[pyfunction]
fn random_density(dim_a: usize, dim_b: usize, rank: usize, seed: u64) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: states::random_bipartite_density(dim_a, dim_b, rank, seed).map_err(py_err)?,
    })
}

#[pyfunction]
fn random_separable(
    dim_a: usize,
    dim_b: usize,
    terms: usize,
    seed: u64,
) -> PyResult<PyDensityMatrix> {
    Ok(PyDensityMatrix {
        inner: states::random_separable(dim_a, dim_b, terms, seed).map_err(py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (rho, tol_detect = TOL_DETECT))]
fn ppt_check(rho: &PyDensityMatrix, tol_detect: f64) -> PyResult<PyCriterionReport> {
    criteria::ppt_check(&rho.inner, tol_detect)
        .map(PyCriterionReport::from_report)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (rho, tol_detect = TOL_DETECT))]
fn ccn_check(rho: &PyDensityMatrix, tol_detect: f64) -> PyResult<PyCriterionReport> {
    criteria::ccn_check(&rho.inner, tol_detect)
        .map(PyCriterionReport::from_report)
        .map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (rho, tol_detect = TOL_DETECT))]
fn lur_detect(rho: &PyDensityMatrix, tol_detect: f64) -> PyResult<PyCriterionReport> {
    criteria::lur_detect(&rho.inner, tol_detect)
        .map(PyCriterionReport::from_report)
        .map_err(py_err)
}

/// Operator Schmidt coefficients, descending.
#[pyfunction]
fn schmidt_coefficients(rho: &PyDensityMatrix) -> PyResult<Vec<f64>> {
    Ok(schmidt_realign::operator_schmidt(&rho.inner)
        .map_err(py_err)?
        .lambdas)
}

/// Trace norm of the realigned matrix (equals the Schmidt coefficient sum).
#[pyfunction]
fn realigned_trace_norm(rho: &PyDensityMatrix) -> PyResult<f64> {
    let r = schmidt_realign::realign(rho.inner.mat(), rho.inner.dim_a(), rho.inner.dim_b())
        .map_err(py_err)?;
    sepcrit::operator_algebra::trace_norm(&r).map_err(py_err)
}

/// CCN witness matrix of a state, as nested (re, im) rows.
#[pyfunction]
fn ccn_witness_matrix(rho: &PyDensityMatrix) -> PyResult<Rows> {
    let w = criteria::ccn_witness(&rho.inner).map_err(py_err)?;
    Ok(matrix_to_rows(w.mat()))
}

/// Expectation of the CCN witness built from `source` on the state `on`.
#[pyfunction]
fn ccn_witness_expectation(source: &PyDensityMatrix, on: &PyDensityMatrix) -> PyResult<f64> {
    let w = criteria::ccn_witness(&source.inner).map_err(py_err)?;
    w.expectation(&on.inner).map_err(py_err)
}

/// Nonlinear witness functional: builds the CCN witness of `source`
/// (a square-system state), forms its Jamiolkowski nonlinear improvement
/// with psi = |phi+>, and evaluates it on `rho`.
#[pyfunction]
#[pyo3(signature = (source, rho, tol_detect = TOL_DETECT))]
fn nonlinear_check(
    source: &PyDensityMatrix,
    rho: &PyDensityMatrix,
    tol_detect: f64,
) -> PyResult<PyCriterionReport> {
    let w = criteria::ccn_witness(&source.inner).map_err(py_err)?;
    let psi = states::max_entangled(source.inner.dim_a()).map_err(py_err)?;
    let nw = nonlinear_witness::build_nonlinear(&w, &psi).map_err(py_err)?;
    nonlinear_witness::nonlinear_value(&nw, &rho.inner, tol_detect)
        .map(PyCriterionReport::from_report)
        .map_err(py_err)
}

/// Bisect the detection threshold of `criterion` (ppt, ccn, lur,
/// lur_fixed) over a built-in family (noisy_singlet, tiles).
#[pyfunction]
#[pyo3(signature = (family, criterion, lo = None, hi = None, tol = 1e-4, tol_detect = TOL_DETECT))]
fn scan_threshold(
    family: &str,
    criterion: &str,
    lo: Option<f64>,
    hi: Option<f64>,
    tol: f64,
    tol_detect: f64,
) -> PyResult<PyScanResult> {
    let fam = states::family_by_name(family).map_err(py_err)?;
    let crit = scan::ScanCriterion::from_str(criterion).map_err(py_err)?;
    let range = fam.p_range();
    let bracket = (lo.unwrap_or(range.0), hi.unwrap_or(range.1));
    let result = scan::bisect_threshold(&fam, crit, bracket, tol, None, tol_detect)
        .map_err(py_err)?;
    Ok(PyScanResult {
        family: result.family,
        criterion: result.criterion.to_string(),
        threshold: result.threshold,
        bracket: result.bracket,
        tolerance: result.tolerance,
        evaluations: result.evaluations,
        monotonicity_warning: result.monotonicity_warning,
    })
}

#[pymodule]
fn sepcrit_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyCriterionReport>()?;
    m.add_class::<PyScanResult>()?;
    m.add_function(wrap_pyfunction!(singlet, m)?)?;
    m.add_function(wrap_pyfunction!(noisy_singlet, m)?)?;
    m.add_function(wrap_pyfunction!(tiles_rho_be, m)?)?;
    m.add_function(wrap_pyfunction!(tiles_state, m)?)?;
    m.add_function(wrap_pyfunction!(random_density, m)?)?;
    m.add_function(wrap_pyfunction!(random_separable, m)?)?;
    m.add_function(wrap_pyfunction!(ppt_check, m)?)?;
    m.add_function(wrap_pyfunction!(ccn_check, m)?)?;
    m.add_function(wrap_pyfunction!(lur_detect, m)?)?;
    m.add_function(wrap_pyfunction!(schmidt_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(realigned_trace_norm, m)?)?;
    m.add_function(wrap_pyfunction!(ccn_witness_matrix, m)?)?;
    m.add_function(wrap_pyfunction!(ccn_witness_expectation, m)?)?;
    m.add_function(wrap_pyfunction!(nonlinear_check, m)?)?;
    m.add_function(wrap_pyfunction!(scan_threshold, m)?)?;
    m.add("TOL_DETECT", TOL_DETECT)?;
    Ok(())
}
