//! Python bindings. Structured results cross the boundary as JSON and are
//! decoded with the standard `json` module, so Python sees plain dicts.

use ::flagcurv::moduli::{self, Certificate, DEFAULT_TOL};
use ::flagcurv::scan::{region_svg, scan};
use ::flagcurv::{closed_form_blocks, omega0 as omega0_coeffs, selftest as battery};
use ::flagcurv::{FlagError, FlagModel, InvariantCoeffs, MetricParams};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde_json::json;

fn err(e: FlagError) -> PyErr {
    match e {
        FlagError::Domain(_) | FlagError::Parse(_) | FlagError::NoBlocks(_) | FlagError::Dimension { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn model_of(name: &str) -> PyResult<FlagModel> {
    name.parse().map_err(|_| PyValueError::new_err(format!("unknown model {name:?}")))
}

fn params(s: [f64; 3]) -> PyResult<MetricParams> {
    MetricParams::new(s).map_err(err)
}

fn loads<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

/// p_r(s) for r = 1, 2, 3.
#[pyfunction]
fn p_polys(s: [f64; 3]) -> PyResult<[f64; 3]> {
    Ok(moduli::p_polys(&params(s)?))
}

/// Classification of g_s as a dict; the certificate, if any, is nested.
#[pyfunction]
#[pyo3(signature = (model, s, tol = None))]
fn classify<'py>(py: Python<'py>, model: &str, s: [f64; 3], tol: Option<f64>) -> PyResult<Bound<'py, PyAny>> {
    let c = moduli::classify(model_of(model)?, &params(s)?, tol.unwrap_or(DEFAULT_TOL)).map_err(err)?;
    loads(py, &serde_json::to_value(&c).expect("classification serializes"))
}

/// The three closed-form blocks as nested lists.
#[pyfunction]
#[pyo3(signature = (model, s, a = None, b = None, omega0 = false))]
fn blocks<'py>(
    py: Python<'py>,
    model: &str,
    s: [f64; 3],
    a: Option<[f64; 3]>,
    b: Option<[f64; 3]>,
    omega0: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let s = params(s)?;
    let c = if omega0 {
        omega0_coeffs(&s)
    } else {
        InvariantCoeffs::new(a.unwrap_or([0.0; 3]), b.unwrap_or([0.0; 3]))
    };
    let bm = closed_form_blocks(model_of(model)?, &s, &c).map_err(err)?;
    loads(py, &bm.to_json())
}

/// Certificate JSON text for the strongest positive verdict.
#[pyfunction]
#[pyo3(signature = (model, s, tol = None))]
fn certify(model: &str, s: [f64; 3], tol: Option<f64>) -> PyResult<String> {
    let model = model_of(model)?;
    let c = moduli::classify(model, &params(s)?, tol.unwrap_or(DEFAULT_TOL)).map_err(err)?;
    c.certificate
        .map(|cert| cert.to_json())
        .ok_or_else(|| PyRuntimeError::new_err(format!("{} at {s:?} is not strongly nonnegative", model.name())))
}

/// Re-verify certificate JSON text from scratch.
#[pyfunction]
#[pyo3(signature = (text, tol = None))]
fn verify_certificate(text: &str, tol: Option<f64>) -> PyResult<bool> {
    let cert = Certificate::from_json(text).map_err(err)?;
    Ok(cert.verify(tol.unwrap_or(DEFAULT_TOL)).map_err(err)?.valid)
}

#[pyfunction]
#[pyo3(signature = (model, samples = 20, seed = 0))]
fn crosscheck<'py>(py: Python<'py>, model: &str, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
    let r = battery::crosscheck(model_of(model)?, samples, seed).map_err(err)?;
    loads(py, &serde_json::to_value(&r).expect("report serializes"))
}

/// Scan CSV text over the slice s1+s2+s3=1.
#[pyfunction]
#[pyo3(signature = (model, resolution = 200))]
fn scan_csv(model: &str, resolution: u32) -> PyResult<String> {
    Ok(scan(model_of(model)?, resolution).map_err(err)?.to_csv())
}

#[pyfunction]
fn svg(model: &str) -> PyResult<String> {
    Ok(region_svg(model_of(model)?))
}

/// List of {name, passed, detail}.
#[pyfunction]
fn selftest(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    loads(py, &json!(battery::run()))
}

#[pymodule]
#[pyo3(name = "flagcurv")]
pub fn flagcurv_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(p_polys, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(blocks, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(crosscheck, m)?)?;
    m.add_function(wrap_pyfunction!(scan_csv, m)?)?;
    m.add_function(wrap_pyfunction!(svg, m)?)?;
    m.add_function(wrap_pyfunction!(selftest, m)?)?;
    Ok(())
}
