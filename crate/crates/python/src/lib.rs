//! Python module `levyskew`: models, the Fourier pricer, the oracles, SK
//! analytics and chain diagnostics.

use std::collections::BTreeMap;

use levy_skew::chain_diagnostics::{self, OptionChain, SkReport};
use levy_skew::skew_analytics::{self, ScanMarket, DEFAULT_ZERO_TOL};
use levy_skew::{FourierConfig, LevyError, MarketParams, OptionKind};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(levyskew, LevySkewError, PyException);
create_exception!(levyskew, NumericalError, LevySkewError);

fn to_py(e: LevyError) -> PyErr {
    let msg = format!("{}: {e}", e.kind());
    if e.is_numerical() {
        NumericalError::new_err(msg)
    } else {
        LevySkewError::new_err(msg)
    }
}

fn kind_of(kind: &str) -> PyResult<OptionKind> {
    match kind {
        "call" => Ok(OptionKind::Call),
        "put" => Ok(OptionKind::Put),
        other => Err(PyValueError::new_err(format!("kind must be 'call' or 'put', got {other:?}"))),
    }
}

/// Lévy model: drift, diffusion volatility and a jump family.
#[pyclass(name = "LevyModel", module = "levyskew", frozen)]
struct PyLevyModel(levy_skew::LevyModel);

#[pymethods]
impl PyLevyModel {
    #[staticmethod]
    #[pyo3(signature = (sigma))]
    fn diffusion(sigma: f64) -> PyResult<Self> {
        levy_skew::LevyModel::diffusion(sigma).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (sigma, lam, mu, delta_j))]
    fn merton(sigma: f64, lam: f64, mu: f64, delta_j: f64) -> PyResult<Self> {
        levy_skew::LevyModel::merton(sigma, lam, mu, delta_j).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (sigma, c, g, m, y))]
    fn cgmy(sigma: f64, c: f64, g: f64, m: f64, y: f64) -> PyResult<Self> {
        levy_skew::LevyModel::cgmy(sigma, c, g, m, y).map(Self).map_err(to_py)
    }

    #[staticmethod]
    #[pyo3(signature = (sigma, a_m, b_m, d_m))]
    fn meixner(sigma: f64, a_m: f64, b_m: f64, d_m: f64) -> PyResult<Self> {
        levy_skew::LevyModel::meixner(sigma, a_m, b_m, d_m).map(Self).map_err(to_py)
    }

    /// Parses the key-value model format; returns `(model, r, delta)`.
    #[staticmethod]
    fn from_kv(text: &str) -> PyResult<(Self, Option<f64>, Option<f64>)> {
        let spec = levy_skew::model_file::parse_model_spec(text).map_err(to_py)?;
        Ok((Self(spec.model), spec.r, spec.delta))
    }

    fn to_kv(&self) -> String {
        levy_skew::model_file::model_to_kv(&self.0)
    }

    #[getter]
    fn family(&self) -> &'static str {
        self.0.jumps.name()
    }

    #[getter]
    fn drift(&self) -> f64 {
        self.0.drift
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.0.sigma
    }

    #[getter]
    fn params(&self) -> BTreeMap<&'static str, f64> {
        self.0.jumps.params().into_iter().collect()
    }

    /// `(lo, hi)` bounds of the open strip of `Re z`.
    fn strip(&self) -> (f64, f64) {
        let s = self.0.strip();
        (s.lo, s.hi)
    }

    fn char_exponent(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.char_exponent(z).map_err(to_py)
    }

    fn mean_correct(&self, r: f64, delta: f64) -> PyResult<Self> {
        self.0.mean_correct(r, delta).map(Self).map_err(to_py)
    }

    fn dual(&self, r: f64, delta: f64) -> PyResult<Self> {
        self.0.dual(r, delta).map(Self).map_err(to_py)
    }

    fn beta(&self) -> PyResult<f64> {
        self.0.beta().map_err(to_py)
    }

    fn with_beta(&self, beta: f64) -> PyResult<Self> {
        self.0.with_beta(beta).map(Self).map_err(to_py)
    }

    fn levy_density(&self, y: f64) -> f64 {
        self.0.levy_density(y)
    }

    fn __repr__(&self) -> String {
        let params: Vec<String> = self
            .0
            .jumps
            .params()
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "LevyModel(family={}, drift={}, sigma={}, {})",
            self.0.jumps.name(),
            self.0.drift,
            self.0.sigma,
            params.join(", ")
        )
    }
}

#[pyclass(name = "FourierConfig", module = "levyskew", frozen, get_all)]
struct PyFourierConfig {
    damping_alpha: f64,
    u_max: f64,
    n_nodes: usize,
    abs_tol: f64,
}

#[pymethods]
impl PyFourierConfig {
    #[new]
    #[pyo3(signature = (damping_alpha=0.75, u_max=200.0, n_nodes=2048, abs_tol=1e-7))]
    fn new(damping_alpha: f64, u_max: f64, n_nodes: usize, abs_tol: f64) -> PyResult<Self> {
        let cfg = PyFourierConfig {
            damping_alpha,
            u_max,
            n_nodes,
            abs_tol,
        };
        cfg.inner().validate().map_err(to_py)?;
        Ok(cfg)
    }
}

impl PyFourierConfig {
    fn inner(&self) -> FourierConfig {
        FourierConfig {
            damping_alpha: self.damping_alpha,
            u_max: self.u_max,
            n_nodes: self.n_nodes,
            abs_tol: self.abs_tol,
        }
    }
}

fn config(cfg: Option<PyRef<'_, PyFourierConfig>>) -> FourierConfig {
    cfg.map(|c| c.inner()).unwrap_or_default()
}

/// European option by damped Fourier inversion. The model is mean-corrected
/// for `(r, delta)` before pricing.
#[pyfunction]
#[pyo3(signature = (model, s0, strike, r, delta, t, kind="call", cfg=None))]
#[allow(clippy::too_many_arguments)]
fn price(
    model: &PyLevyModel,
    s0: f64,
    strike: f64,
    r: f64,
    delta: f64,
    t: f64,
    kind: &str,
    cfg: Option<PyRef<'_, PyFourierConfig>>,
) -> PyResult<f64> {
    let market = MarketParams::new(s0, r, delta, t).map_err(to_py)?;
    let m = model.0.mean_correct(r, delta).map_err(to_py)?;
    let cfg = config(cfg);
    match kind_of(kind)? {
        OptionKind::Call => levy_skew::euro_call(&market, &m, strike, &cfg),
        OptionKind::Put => levy_skew::euro_put(&market, &m, strike, &cfg),
    }
    .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (model, s0, strike, r, delta, t, kind="call", n_terms=60))]
#[allow(clippy::too_many_arguments)]
fn merton_series(
    model: &PyLevyModel,
    s0: f64,
    strike: f64,
    r: f64,
    delta: f64,
    t: f64,
    kind: &str,
    n_terms: usize,
) -> PyResult<f64> {
    let market = MarketParams::new(s0, r, delta, t).map_err(to_py)?;
    levy_skew::merton_series(&market, &model.0, strike, kind_of(kind)?, n_terms).map_err(to_py)
}

/// Monte Carlo price; returns `(estimate, std_error)`.
#[pyfunction]
#[pyo3(signature = (model, s0, strike, r, delta, t, kind="call", n_paths=100_000, seed=42))]
#[allow(clippy::too_many_arguments)]
fn mc_price(
    py: Python<'_>,
    model: &PyLevyModel,
    s0: f64,
    strike: f64,
    r: f64,
    delta: f64,
    t: f64,
    kind: &str,
    n_paths: usize,
    seed: u64,
) -> PyResult<(f64, f64)> {
    let market = MarketParams::new(s0, r, delta, t).map_err(to_py)?;
    let m = model.0.mean_correct(r, delta).map_err(to_py)?;
    let kind = kind_of(kind)?;
    let res = py
        .detach(|| levy_skew::mc_price(&market, &m, strike, kind, n_paths, seed))
        .map_err(to_py)?;
    Ok((res.estimate, res.std_error))
}

/// `(x, k_call, k_put, sk, excess)` on futures-style inputs.
#[pyfunction]
#[pyo3(signature = (model, f0, r, t, x, cfg=None))]
fn sk(
    model: &PyLevyModel,
    f0: f64,
    r: f64,
    t: f64,
    x: f64,
    cfg: Option<PyRef<'_, PyFourierConfig>>,
) -> PyResult<(f64, f64, f64, f64, f64)> {
    let p = skew_analytics::sk(&model.0, f0, r, t, x, &config(cfg)).map_err(to_py)?;
    Ok((p.x, p.k_call, p.k_put, p.sk, p.excess))
}

#[pyfunction]
#[pyo3(signature = (model, f0, r, t, x, cfg=None))]
fn bates_rule_residual(
    model: &PyLevyModel,
    f0: f64,
    r: f64,
    t: f64,
    x: f64,
    cfg: Option<PyRef<'_, PyFourierConfig>>,
) -> PyResult<f64> {
    skew_analytics::bates_rule_residual(&model.0, f0, r, t, x, &config(cfg)).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (model, s0, strike, r, delta, t, cfg=None))]
fn duality_check(
    model: &PyLevyModel,
    s0: f64,
    strike: f64,
    r: f64,
    delta: f64,
    t: f64,
    cfg: Option<PyRef<'_, PyFourierConfig>>,
) -> PyResult<f64> {
    skew_analytics::duality_check(&model.0, s0, strike, r, delta, t, &config(cfg)).map_err(to_py)
}

/// Rows `(beta, x, excess, sign)`; skipped cells carry `None` for both.
#[pyfunction]
#[pyo3(signature = (model, betas, xs, f0, r, t, zero_tol=DEFAULT_ZERO_TOL, cfg=None))]
#[allow(clippy::too_many_arguments)]
fn sk_excess_sign_scan(
    py: Python<'_>,
    model: &PyLevyModel,
    betas: Vec<f64>,
    xs: Vec<f64>,
    f0: f64,
    r: f64,
    t: f64,
    zero_tol: f64,
    cfg: Option<PyRef<'_, PyFourierConfig>>,
) -> Vec<(f64, f64, Option<f64>, Option<i8>)> {
    let cfg = config(cfg);
    let base = model.0;
    let cells = py.detach(|| {
        skew_analytics::sk_excess_sign_scan(&base, &betas, &xs, ScanMarket { f0, r, t }, &cfg, zero_tol)
    });
    cells
        .into_iter()
        .map(|c| {
            let o = c.outcome.ok();
            (c.beta, c.x, o.map(|o| o.excess), o.map(|o| o.sign))
        })
        .collect()
}

/// `(rows, verdict)` with rows `(beta, call or None)`.
#[pyfunction]
#[pyo3(signature = (model, betas, f0, strike, r, t, cfg=None))]
#[allow(clippy::too_many_arguments)]
fn monotonicity_scan(
    py: Python<'_>,
    model: &PyLevyModel,
    betas: Vec<f64>,
    f0: f64,
    strike: f64,
    r: f64,
    t: f64,
    cfg: Option<PyRef<'_, PyFourierConfig>>,
) -> (Vec<(f64, Option<f64>)>, &'static str) {
    let cfg = config(cfg);
    let base = model.0;
    let scan = py.detach(|| {
        skew_analytics::monotonicity_scan(&base, &betas, strike, ScanMarket { f0, r, t }, &cfg)
    });
    let rows = scan.rows.into_iter().map(|r| (r.beta, r.call.ok())).collect();
    (rows, scan.verdict.as_str())
}

type ReportRows = Vec<(f64, f64, f64, f64, f64)>;

fn rows(report: &SkReport) -> ReportRows {
    report
        .rows
        .iter()
        .map(|r| (r.k_primary, r.k_paired, r.x, r.x_obs, r.excess))
        .collect()
}

/// Runs both paired-strike tables on a chain CSV text.
///
/// Returns `(calls_table, puts_table, summary)`; table rows are
/// `(k_primary, k_paired, x, x_obs, excess)` and the summary is a dict.
#[pyfunction]
fn chain_report(text: &str) -> PyResult<(ReportRows, ReportRows, BTreeMap<String, String>)> {
    let chain = chain_diagnostics::parse_chain_csv(text).map_err(to_py)?;
    let rep = chain_diagnostics::chain_report(&chain).map_err(to_py)?;
    let summary = rep
        .summary
        .to_kv()
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    Ok((rows(&rep.calls_table), rows(&rep.puts_table), summary))
}

/// Chain CSV text priced from `model` at `strikes` for both calls and puts.
#[pyfunction]
#[pyo3(signature = (model, f0, r, t, strikes, cfg=None))]
fn synthetic_chain(
    model: &PyLevyModel,
    f0: f64,
    r: f64,
    t: f64,
    strikes: Vec<f64>,
    cfg: Option<PyRef<'_, PyFourierConfig>>,
) -> PyResult<String> {
    let chain = OptionChain::synthetic(&model.0, f0, r, t, &strikes, &strikes, &config(cfg))
        .map_err(to_py)?;
    let mut buf = Vec::new();
    chain_diagnostics::write_chain_csv(&chain, &mut buf)
        .map_err(|e| LevySkewError::new_err(e.to_string()))?;
    String::from_utf8(buf).map_err(|e| LevySkewError::new_err(e.to_string()))
}

#[pymodule]
fn levyskew(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLevyModel>()?;
    m.add_class::<PyFourierConfig>()?;
    m.add("LevySkewError", m.py().get_type::<LevySkewError>())?;
    m.add("NumericalError", m.py().get_type::<NumericalError>())?;
    m.add_function(wrap_pyfunction!(price, m)?)?;
    m.add_function(wrap_pyfunction!(merton_series, m)?)?;
    m.add_function(wrap_pyfunction!(mc_price, m)?)?;
    m.add_function(wrap_pyfunction!(sk, m)?)?;
    m.add_function(wrap_pyfunction!(bates_rule_residual, m)?)?;
    m.add_function(wrap_pyfunction!(duality_check, m)?)?;
    m.add_function(wrap_pyfunction!(sk_excess_sign_scan, m)?)?;
    m.add_function(wrap_pyfunction!(monotonicity_scan, m)?)?;
    m.add_function(wrap_pyfunction!(chain_report, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_chain, m)?)?;
    Ok(())
}
