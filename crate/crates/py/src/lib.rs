//! Python bindings for the `nanoheat` library.
//!
//! Temperatures enter as inverse temperatures; `float("inf")` selects the
//! infinite alpha wherever an alpha is taken.

use std::sync::Arc;

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use nanoheat::macro_engine;
use nanoheat::multicycle;
use nanoheat::nano_engine::{self, EpsilonFamily, QuasiStaticConfig};
use nanoheat::second_laws;
use nanoheat::thermo_core::{self, AlphaValue, DiagonalState, EnergySpectrum, QubitBath};
use nanoheat::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Parameter(_) | Error::Domain(_) | Error::Range(_) | Error::Capacity { .. } => {
            PyValueError::new_err(e.to_string())
        }
        Error::ConstraintViolation { .. } | Error::NoConstraint | Error::DichotomyViolation { .. } => {
            PyArithmeticError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn alpha(a: f64) -> PyResult<AlphaValue> {
    AlphaValue::from_f64(a).map_err(to_py)
}

fn family(name: &str, c: f64, k: f64) -> PyResult<EpsilonFamily> {
    match name.to_lowercase().replace('_', "-").as_str() {
        "exponential" => Ok(EpsilonFamily::Exponential),
        "log-linear" => Ok(EpsilonFamily::LogLinear),
        "power" => EpsilonFamily::power(c, k).map_err(to_py),
        other => Err(PyValueError::new_err(format!("unknown family: {other}"))),
    }
}

fn state(levels: Vec<f64>, probs: Vec<f64>) -> PyResult<DiagonalState> {
    let pairs = levels.into_iter().zip(probs).collect();
    DiagonalState::from_pairs(pairs).map_err(to_py)
}

/// Thermal probabilities on `levels`, returned in sorted level order.
#[pyfunction]
fn thermal_state(levels: Vec<f64>, beta: f64) -> PyResult<Vec<f64>> {
    let s = EnergySpectrum::new(levels).map_err(to_py)?;
    Ok(thermo_core::thermal_state(&s, beta).map_err(to_py)?.probs().to_vec())
}

#[pyfunction]
fn renyi_divergence(levels: Vec<f64>, p: Vec<f64>, q: Vec<f64>, a: f64) -> PyResult<f64> {
    let p = state(levels.clone(), p)?;
    let q = state(levels, q)?;
    let q = DiagonalState::new(p.spectrum_arc(), q.probs().to_vec()).map_err(to_py)?;
    thermo_core::renyi_divergence(&p, &q, alpha(a)?).map_err(to_py)
}

#[pyfunction]
fn binary_entropy(eps: f64) -> PyResult<f64> {
    thermo_core::binary_entropy(eps).map_err(to_py)
}

/// Cold-bath transition between thermal states of identical qubits.
#[pyclass(name = "TransitionInstance")]
struct PyInstance {
    inner: second_laws::TransitionInstance,
}

#[pymethods]
impl PyInstance {
    #[new]
    #[pyo3(signature = (gap, beta_c, beta_f, beta_h, eps=0.0, copies=1))]
    fn new(gap: f64, beta_c: f64, beta_f: f64, beta_h: f64, eps: f64, copies: u32) -> PyResult<Self> {
        let s = Arc::new(EnergySpectrum::qubit(gap).map_err(to_py)?);
        let inner = second_laws::TransitionInstance::thermal(s, beta_c, beta_f, beta_h, eps)
            .and_then(|i| i.with_copies(copies))
            .map_err(to_py)?;
        Ok(Self { inner })
    }

    fn w_alpha(&self, a: f64) -> PyResult<f64> {
        second_laws::w_alpha(&self.inner, alpha(a)?).map_err(to_py)
    }

    /// `(w_ext, argmin_alpha)`; the alpha is a float, possibly infinite.
    fn max_extractable_work(&self) -> PyResult<(f64, f64)> {
        let r = second_laws::max_extractable_work(&self.inner).map_err(to_py)?;
        Ok((r.w_ext, r.argmin_alpha.as_f64()))
    }

    fn macro_work(&self) -> f64 {
        macro_engine::macro_work(&self.inner)
    }

    fn efficiency(&self, w_ext: f64) -> PyResult<f64> {
        Ok(macro_engine::efficiency_breakdown(&self.inner, w_ext).map_err(to_py)?.eta)
    }

    fn delta_cold(&self) -> f64 {
        self.inner.delta_cold()
    }

    #[getter]
    fn eps(&self) -> f64 {
        self.inner.eps()
    }
}

#[pyclass(name = "RegimeClassification", get_all)]
struct PyRegime {
    omega: f64,
    tanh_indicator: f64,
    g_case: String,
    carnot_achievable: bool,
    eta_quasistatic: f64,
    eta_carnot: f64,
    g_pattern_consistent: bool,
}

#[pyfunction]
fn classify_regime(gap: f64, beta_c: f64, beta_h: f64) -> PyResult<PyRegime> {
    let c = nano_engine::classify_regime(gap, beta_c, beta_h).map_err(to_py)?;
    Ok(PyRegime {
        omega: c.omega,
        tanh_indicator: c.tanh_indicator,
        g_case: c.g_case.label().to_string(),
        carnot_achievable: c.carnot_achievable,
        eta_quasistatic: c.eta_quasistatic,
        eta_carnot: c.eta_carnot,
        g_pattern_consistent: c.g_pattern_consistent,
    })
}

/// Minimum Omega over a bath of qubit gaps.
#[pyfunction]
fn omega(gaps: Vec<f64>, beta_c: f64, beta_h: f64) -> PyResult<f64> {
    let bath = QubitBath::new(gaps).map_err(to_py)?;
    nano_engine::omega(&bath, beta_c, beta_h).map_err(to_py)
}

#[pyfunction]
fn gamma(gap: f64, beta_c: f64, beta_h: f64, a: f64) -> PyResult<f64> {
    nano_engine::gamma(gap, beta_c, beta_h, a).map_err(to_py)
}

#[pyfunction]
fn b_alpha(gap: f64, beta_c: f64, beta_h: f64, a: f64) -> PyResult<f64> {
    nano_engine::b_alpha(gap, beta_c, beta_h, a).map_err(to_py)
}

/// `(eps, kappa_bar, sigma)`; sigma is `inf` when the limit diverges.
#[pyfunction]
#[pyo3(signature = (name, g, c=1.0, k=0.5))]
fn epsilon_family_eval(name: &str, g: f64, c: f64, k: f64) -> PyResult<(f64, f64, f64)> {
    let r = nano_engine::epsilon_family_eval(&family(name, c, k)?, g).map_err(to_py)?;
    Ok((r.eps, r.kappa_bar, r.sigma.unwrap_or(f64::INFINITY)))
}

/// `(w_ext_predicted, w_ext_numeric, eta_predicted, eta_numeric)`.
#[pyfunction]
#[pyo3(signature = (gap, n, beta_c, beta_h, g, name="power", c=1.0, k=0.5))]
#[allow(clippy::too_many_arguments)]
fn quasistatic_engine(
    gap: f64,
    n: usize,
    beta_c: f64,
    beta_h: f64,
    g: f64,
    name: &str,
    c: f64,
    k: f64,
) -> PyResult<(f64, f64, f64, f64)> {
    let bath = QubitBath::identical(gap, n).map_err(to_py)?;
    let cfg = QuasiStaticConfig::new(bath, beta_c, beta_h, g, family(name, c, k)?).map_err(to_py)?;
    let r = nano_engine::quasistatic_engine(&cfg).map_err(to_py)?;
    Ok((r.w_ext_predicted, r.w_ext_numeric, r.eta_predicted, r.eta_numeric))
}

/// Deficits `(eta, work, entropy, failure)` of an N-cycle plan.
#[pyfunction]
fn multicycle_deficits(
    w: f64,
    gap: f64,
    beta_c: f64,
    beta_h: f64,
    kappa_bar: f64,
    n: u64,
) -> PyResult<(f64, f64, f64, f64)> {
    let ledger = multicycle::plan_cycles(w, gap, beta_c, beta_h, kappa_bar, n).map_err(to_py)?;
    let r = multicycle::run_cycles(&ledger);
    Ok((r.delta_eta, r.delta_work, r.delta_entropy, r.delta_failure))
}

#[pymodule]
fn nanoheat_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PyRegime>()?;
    m.add_function(wrap_pyfunction!(thermal_state, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(binary_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(classify_regime, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(b_alpha, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon_family_eval, m)?)?;
    m.add_function(wrap_pyfunction!(quasistatic_engine, m)?)?;
    m.add_function(wrap_pyfunction!(multicycle_deficits, m)?)?;
    Ok(())
}
