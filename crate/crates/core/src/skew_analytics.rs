//! Skewness premium, Bates' x% rule, numerical put-call duality, and the
//! beta scans that probe the sign of the SK excess and price monotonicity.
//!
//! SK is quoted on futures-style inputs: the underlying level is the future
//! `F0` and `delta = r`, so the call at `(1+x)F0` and the put at `F0/(1+x)`
//! are equally far out of the money in log terms.

use rayon::prelude::*;

use crate::error::{invalid, LevyError, Result};
use crate::levy_models::{LevyModel, MarketParams};
use crate::pricing_fourier::{euro_call, euro_call_batch, euro_put, put_from_call, FourierConfig};

/// Puts below this price are not used as ratio denominators.
pub const PUT_PRICE_FLOOR: f64 = 1e-10;

/// Default band within which an SK excess counts as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkPoint {
    pub x: f64,
    pub k_call: f64,
    pub k_put: f64,
    pub sk: f64,
    pub excess: f64,
}

struct SkLegs {
    k_call: f64,
    k_put: f64,
    call: f64,
    put: f64,
}

fn sk_legs(model: &LevyModel, f0: f64, r: f64, t: f64, x: f64, cfg: &FourierConfig) -> Result<SkLegs> {
    if !(x >= 0.0 && x.is_finite()) {
        return Err(invalid(format!("x must be nonnegative, got {x}")));
    }
    let market = MarketParams::futures(f0, r, t)?;
    let model = model.mean_correct(r, r)?;
    let k_call = (1.0 + x) * f0;
    let k_put = f0 / (1.0 + x);
    let calls = euro_call_batch(&market, &model, &[k_call, k_put], cfg)?;
    let put = put_from_call(&market, k_put, calls[1]);
    if !(put >= PUT_PRICE_FLOOR) {
        return Err(LevyError::DegeneratePut { strike: k_put, price: put });
    }
    Ok(SkLegs {
        k_call,
        k_put,
        call: calls[0],
        put,
    })
}

/// `SK(x) = c(F0, (1+x)F0) / p(F0, F0/(1+x)) - 1` with `delta = r`.
///
/// The model is mean-corrected internally for `r = delta`.
pub fn sk(model: &LevyModel, f0: f64, r: f64, t: f64, x: f64, cfg: &FourierConfig) -> Result<SkPoint> {
    let legs = sk_legs(model, f0, r, t, x, cfg)?;
    let sk = legs.call / legs.put - 1.0;
    Ok(SkPoint {
        x,
        k_call: legs.k_call,
        k_put: legs.k_put,
        sk,
        excess: sk - x,
    })
}

/// `c(F0, (1+x)F0) - (1+x) p(F0, F0/(1+x))`; zero for symmetric markets.
pub fn bates_rule_residual(
    model: &LevyModel,
    f0: f64,
    r: f64,
    t: f64,
    x: f64,
    cfg: &FourierConfig,
) -> Result<f64> {
    let legs = sk_legs(model, f0, r, t, x, cfg)?;
    Ok(legs.call - (1.0 + x) * legs.put)
}

/// Both sides of the duality identity `c(S0, K, r, delta, psi) = p(K, S0, delta, r, psi~)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityLegs {
    pub call: f64,
    pub dual_put: f64,
}

impl DualityLegs {
    pub fn residual(&self) -> f64 {
        (self.call - self.dual_put).abs()
    }
}

pub fn duality_legs(
    model: &LevyModel,
    s0: f64,
    strike: f64,
    r: f64,
    delta: f64,
    t: f64,
    cfg: &FourierConfig,
) -> Result<DualityLegs> {
    let market = MarketParams::new(s0, r, delta, t)?;
    let model = model.mean_correct(r, delta)?;
    let dual = model.dual(r, delta)?;
    let call = euro_call(&market, &model, strike, cfg)?;
    let dual_put = euro_put(&market.dual(strike)?, &dual, s0, cfg)?;
    Ok(DualityLegs { call, dual_put })
}

/// `|c(S0, K, r, delta, T, psi) - p(K, S0, delta, r, T, psi~)|`.
pub fn duality_check(
    model: &LevyModel,
    s0: f64,
    strike: f64,
    r: f64,
    delta: f64,
    t: f64,
    cfg: &FourierConfig,
) -> Result<f64> {
    duality_legs(model, s0, strike, r, delta, t, cfg).map(|l| l.residual())
}

/// Shared grid inputs for the beta scans.
#[derive(Debug, Clone, Copy)]
pub struct ScanMarket {
    pub f0: f64,
    pub r: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExcessSign {
    pub sk: f64,
    pub excess: f64,
    /// Sign of `sk - x`, zero inside the tolerance band.
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignCell {
    pub beta: f64,
    pub x: f64,
    pub outcome: Result<ExcessSign>,
}

impl SignCell {
    /// Sign predicted for `sk - x` by the beta criterion: `sign(beta + 1/2)`.
    pub fn predicted_sign(&self) -> i8 {
        sign_with_tol(self.beta + 0.5, 0.0)
    }

    /// `None` for skipped cells.
    pub fn matches_prediction(&self) -> Option<bool> {
        self.outcome
            .as_ref()
            .ok()
            .map(|o| o.sign == self.predicted_sign())
    }
}

fn sign_with_tol(v: f64, tol: f64) -> i8 {
    if v.abs() <= tol {
        0
    } else if v > 0.0 {
        1
    } else {
        -1
    }
}

/// Re-tilts `base` to every beta (fixed symmetric factor) and records the
/// sign of the SK excess at each x. Cells whose model cannot be built or
/// priced are kept with their error. Output is in (beta, x) row-major order.
pub fn sk_excess_sign_scan(
    base: &LevyModel,
    betas: &[f64],
    xs: &[f64],
    mkt: ScanMarket,
    cfg: &FourierConfig,
    zero_tol: f64,
) -> Vec<SignCell> {
    let cells: Vec<(f64, f64)> = betas
        .iter()
        .flat_map(|&b| xs.iter().map(move |&x| (b, x)))
        .collect();
    cells
        .par_iter()
        .map(|&(beta, x)| {
            let outcome = (|| {
                if !(x > 0.0) {
                    return Err(invalid(format!("x must be positive, got {x}")));
                }
                let model = base.with_beta(beta)?;
                let p = sk(&model, mkt.f0, mkt.r, mkt.t, x, cfg)?;
                Ok(ExcessSign {
                    sk: p.sk,
                    excess: p.excess,
                    sign: sign_with_tol(p.excess, zero_tol),
                })
            })();
            SignCell { beta, x, outcome }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Constant,
    NotMonotone,
    /// Fewer than two cells could be priced.
    Insufficient,
}

impl Monotonicity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Monotonicity::Increasing => "increasing",
            Monotonicity::Decreasing => "decreasing",
            Monotonicity::Constant => "constant",
            Monotonicity::NotMonotone => "not-monotone",
            Monotonicity::Insufficient => "insufficient",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityRow {
    pub beta: f64,
    pub call: Result<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityScan {
    pub rows: Vec<MonotonicityRow>,
    pub verdict: Monotonicity,
}

/// Call prices at a fixed strike as beta varies over `betas` (in the given
/// order), with a verdict on whether the sequence is monotone. Differences
/// within `2·abs_tol` count as flat.
pub fn monotonicity_scan(
    base: &LevyModel,
    betas: &[f64],
    strike: f64,
    mkt: ScanMarket,
    cfg: &FourierConfig,
) -> MonotonicityScan {
    let rows: Vec<MonotonicityRow> = betas
        .par_iter()
        .map(|&beta| {
            let call = (|| {
                let market = MarketParams::futures(mkt.f0, mkt.r, mkt.t)?;
                let model = base.with_beta(beta)?.mean_correct(mkt.r, mkt.r)?;
                euro_call(&market, &model, strike, cfg)
            })();
            MonotonicityRow { beta, call }
        })
        .collect();
    let prices: Vec<f64> = rows.iter().filter_map(|r| r.call.as_ref().ok().copied()).collect();
    let verdict = classify(&prices, 2.0 * cfg.abs_tol);
    MonotonicityScan { rows, verdict }
}

fn classify(prices: &[f64], tol: f64) -> Monotonicity {
    if prices.len() < 2 {
        return Monotonicity::Insufficient;
    }
    let (mut up, mut down) = (false, false);
    for w in prices.windows(2) {
        match sign_with_tol(w[1] - w[0], tol) {
            1 => up = true,
            -1 => down = true,
            _ => {}
        }
    }
    match (up, down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::Increasing,
        (false, true) => Monotonicity::Decreasing,
        (true, true) => Monotonicity::NotMonotone,
    }
}
