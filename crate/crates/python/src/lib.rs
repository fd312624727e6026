//! Python bindings for the disk experiments and symbol constants.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use robinlab::circle_ops::PiecewiseCoefficient;
use robinlab::disk_model::DiskParameters;
use robinlab::krein_reduction::{InverseMethod, KreinModel, PairVariant};
use robinlab::runner;
use robinlab::spectral::{FitWindow, SingularSpectrum, tail_fit as fit_tail};
use robinlab::symbol_constants;

fn py_err(e: robinlab::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn model(kappa: f64, cutoff: usize) -> PyResult<KreinModel> {
    KreinModel::new(&DiskParameters::new(kappa, cutoff).map_err(py_err)?).map_err(py_err)
}

/// Real step function: `breaks` are interior jump points in turns, one more
/// value than breaks.
fn step(breaks: Vec<f64>, values: Vec<f64>) -> PyResult<PiecewiseCoefficient> {
    PiecewiseCoefficient::real_step(&breaks, &values).map_err(py_err)
}

fn variant(name: &str) -> PyResult<PairVariant> {
    match name {
        "full" => Ok(PairVariant::Full),
        "leading" => Ok(PairVariant::Leading),
        other => Err(PyValueError::new_err(format!(
            "variant must be 'full' or 'leading', got {other:?}"
        ))),
    }
}

/// Descending s-numbers of the Neumann minus Dirichlet resolvent difference.
#[pyfunction]
fn neumann_dirichlet_snumbers(kappa: f64, cutoff: usize) -> PyResult<Vec<f64>> {
    let km = model(kappa, cutoff)?;
    let s = km.snumbers(&km.neumann_dirichlet_kernel()).map_err(py_err)?;
    Ok(s.values().to_vec())
}

/// Descending s-numbers of a Robin pair difference with step coefficients.
#[pyfunction]
#[pyo3(signature = (kappa, cutoff, b1_breaks, b1_values, b2_breaks, b2_values, variant_name = "full"))]
fn robin_pair_snumbers(
    kappa: f64,
    cutoff: usize,
    b1_breaks: Vec<f64>,
    b1_values: Vec<f64>,
    b2_breaks: Vec<f64>,
    b2_values: Vec<f64>,
    variant_name: &str,
) -> PyResult<Vec<f64>> {
    let km = model(kappa, cutoff)?;
    let s = km
        .robin_pair_snumbers(
            &step(b1_breaks, b1_values)?,
            &step(b2_breaks, b2_values)?,
            variant(variant_name)?,
            InverseMethod::Direct,
        )
        .map_err(py_err)?;
    Ok(s.values().to_vec())
}

/// `(limit, residual)` of `s_j j^p` over `[j_lo, j_hi]` (1-based).
#[pyfunction]
fn tail_fit(values: Vec<f64>, p: f64, j_lo: usize, j_hi: usize, cutoff: usize) -> PyResult<(f64, f64)> {
    let s = SingularSpectrum::from_unsorted(values, cutoff).map_err(py_err)?;
    let w = FitWindow::checked(j_lo, j_hi, cutoff).map_err(py_err)?;
    let fit = fit_tail(&s, p, w).map_err(py_err)?;
    Ok((fit.limit, fit.residual))
}

/// `C₀` for dimension `n`.
#[pyfunction]
fn c_neumann_dirichlet(n: usize) -> PyResult<f64> {
    Ok(symbol_constants::c_neumann_dirichlet(n).map_err(py_err)?.value)
}

/// `C` of a planar Robin pair whose difference is the given step function.
#[pyfunction]
fn c_robin_pair(breaks: Vec<f64>, values: Vec<f64>) -> PyResult<f64> {
    Ok(symbol_constants::c_robin_pair(&step(breaks, values)?, 2)
        .map_err(py_err)?
        .value)
}

/// Runs a TOML experiment list and returns one JSON record per experiment.
#[pyfunction]
#[pyo3(signature = (config_text, threads = 1))]
fn run_config(py: Python<'_>, config_text: &str, threads: usize) -> PyResult<Vec<String>> {
    let configs = runner::parse_config(config_text).map_err(py_err)?;
    let records = py.detach(|| runner::run_all(&configs, threads));
    records
        .iter()
        .map(|r| serde_json::to_string(r).map_err(|e| PyValueError::new_err(e.to_string())))
        .collect()
}

#[pymodule]
fn robinlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(neumann_dirichlet_snumbers, m)?)?;
    m.add_function(wrap_pyfunction!(robin_pair_snumbers, m)?)?;
    m.add_function(wrap_pyfunction!(tail_fit, m)?)?;
    m.add_function(wrap_pyfunction!(c_neumann_dirichlet, m)?)?;
    m.add_function(wrap_pyfunction!(c_robin_pair, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
