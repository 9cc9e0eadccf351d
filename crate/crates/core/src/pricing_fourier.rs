//! European options by damped Fourier inversion of the characteristic exponent.
//!
//! With `k = ln(K/S0)` and damping `alpha`, the call is
//!
//! ```text
//! C = S0 e^{-alpha k - rT} / pi · ∫_0^∞ Re[ e^{-iuk} e^{T psi(1 + alpha + iu)}
//!                                        / (alpha² + alpha - u² + i(2 alpha + 1)u) ] du
//! ```
//!
//! truncated at `u_max` and integrated with a composite Gauss-Legendre rule.
//! Strikes below spot invert the put instead (damping `-1 - alpha`) and convert
//! by parity. `euro_put` always comes from parity, exact once `psi(1) = r - delta`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, LevyError, Result};
use crate::levy_models::{JumpFamily, LevyModel, MarketParams};
use crate::quadrature::CompositeRule;

/// Largest allowed `|psi(1) - (r - delta)|` before a model is treated as not
/// mean-corrected for the market.
const MARTINGALE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierConfig {
    pub damping_alpha: f64,
    pub u_max: f64,
    pub n_nodes: usize,
    pub abs_tol: f64,
}

impl Default for FourierConfig {
    fn default() -> Self {
        FourierConfig {
            damping_alpha: 0.75,
            u_max: 200.0,
            n_nodes: 2048,
            abs_tol: 1e-7,
        }
    }
}

impl FourierConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.damping_alpha > 0.0 && self.damping_alpha.is_finite()) {
            return Err(invalid(format!(
                "damping_alpha must be positive, got {}",
                self.damping_alpha
            )));
        }
        if !(self.u_max > 0.0 && self.u_max.is_finite()) {
            return Err(invalid(format!("u_max must be positive, got {}", self.u_max)));
        }
        if self.n_nodes < 64 || self.n_nodes % 2 != 0 {
            return Err(invalid(format!(
                "n_nodes must be even and >= 64, got {}",
                self.n_nodes
            )));
        }
        if !(self.abs_tol > 0.0) {
            return Err(invalid(format!("abs_tol must be positive, got {}", self.abs_tol)));
        }
        Ok(())
    }
}

fn check_martingale(market: &MarketParams, model: &LevyModel) -> Result<()> {
    let psi1 = model.char_exponent(Complex64::new(1.0, 0.0))?.re;
    let growth = market.r - market.delta;
    if (psi1 - growth).abs() > MARTINGALE_TOL * growth.abs().max(1.0) {
        return Err(invalid(format!(
            "model is not mean-corrected: psi(1) = {psi1}, expected r - delta = {growth}"
        )));
    }
    Ok(())
}

fn check_strike(strike: f64) -> Result<()> {
    if strike > 0.0 && strike.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("strike must be positive, got {strike}")))
    }
}

/// True when `X_T` is deterministic and the inversion integrand never decays.
fn is_degenerate(model: &LevyModel) -> bool {
    model.sigma == 0.0
        && match model.jumps {
            JumpFamily::None => true,
            JumpFamily::Merton { lambda, .. } => lambda == 0.0,
            _ => false,
        }
}

/// One damped inversion: precomputed `e^{T psi(1 + alpha + iu)} / denominator(u)`
/// at each quadrature point. With `alpha > 0` the inversion yields the call,
/// with `alpha < -1` the put.
struct DampedLeg {
    alpha: f64,
    kernel: Vec<Complex64>,
    kernel_at_cutoff: Complex64,
}

impl DampedLeg {
    fn new(market: &MarketParams, model: &LevyModel, rule: &CompositeRule, u_max: f64, alpha: f64) -> Self {
        let shift = 1.0 + alpha;
        let kernel_fn = |u: f64| {
            let z = Complex64::new(shift, u);
            let phi = (market.t * model.exponent_unchecked(z)).exp();
            phi / Complex64::new(alpha * alpha + alpha - u * u, (2.0 * alpha + 1.0) * u)
        };
        DampedLeg {
            alpha,
            kernel: rule.points.iter().map(|&u| kernel_fn(u)).collect(),
            kernel_at_cutoff: kernel_fn(u_max),
        }
    }
}

/// Reusable call pricer for one (market, model, config) triple.
///
/// Strikes below spot are priced through the out-of-the-money put (damping
/// `-1 - alpha`) plus parity, which keeps the `e^{-alpha k}` prefactor small
/// for deep in-the-money calls. If the strip does not reach `-alpha`, the
/// call leg is used everywhere.
struct CallPricer<'a> {
    market: &'a MarketParams,
    model: &'a LevyModel,
    cfg: &'a FourierConfig,
    rule: CompositeRule,
    call_leg: DampedLeg,
    put_leg: Option<DampedLeg>,
}

impl<'a> CallPricer<'a> {
    fn new(market: &'a MarketParams, model: &'a LevyModel, cfg: &'a FourierConfig) -> Result<Self> {
        cfg.validate()?;
        check_martingale(market, model)?;
        let strip = model.strip();
        strip.check(1.0 + cfg.damping_alpha)?;
        let rule = CompositeRule::new(0.0, cfg.u_max, cfg.n_nodes);
        let call_leg = DampedLeg::new(market, model, &rule, cfg.u_max, cfg.damping_alpha);
        let put_alpha = -1.0 - cfg.damping_alpha;
        let put_leg = strip
            .contains(1.0 + put_alpha)
            .then(|| DampedLeg::new(market, model, &rule, cfg.u_max, put_alpha));
        Ok(CallPricer {
            market,
            model,
            cfg,
            rule,
            call_leg,
            put_leg,
        })
    }

    fn invert(&self, leg: &DampedLeg, k: f64) -> Result<f64> {
        let m = self.market;
        let pref = m.s0 * (-leg.alpha * k - m.r * m.t).exp() / std::f64::consts::PI;

        let tail = pref * leg.kernel_at_cutoff.norm() * self.cfg.u_max;
        let limit = self.cfg.abs_tol / 10.0;
        if !(tail <= limit) {
            return Err(LevyError::TruncationWarning { tail, limit });
        }

        let integral: f64 = self
            .rule
            .points
            .iter()
            .zip(&self.rule.weights)
            .zip(&leg.kernel)
            .map(|((&u, &w), kern)| {
                let osc = Complex64::new(0.0, -u * k).exp();
                w * (osc * kern).re
            })
            .sum();
        Ok(pref * integral)
    }

    fn call(&self, strike: f64) -> Result<f64> {
        check_strike(strike)?;
        let m = self.market;
        if is_degenerate(self.model) {
            let terminal = m.s0 * (self.model.drift * m.t).exp();
            return Ok((-m.r * m.t).exp() * (terminal - strike).max(0.0));
        }
        let k = (strike / m.s0).ln();
        match &self.put_leg {
            Some(leg) if k < 0.0 => {
                let put = self.invert(leg, k)?;
                Ok(put + m.s0 * (-m.delta * m.t).exp() - strike * (-m.r * m.t).exp())
            }
            _ => self.invert(&self.call_leg, k),
        }
    }
}

/// `E e^{-rT}(S_T - K)^+`; the model must be mean-corrected for the market.
pub fn euro_call(
    market: &MarketParams,
    model: &LevyModel,
    strike: f64,
    cfg: &FourierConfig,
) -> Result<f64> {
    CallPricer::new(market, model, cfg)?.call(strike)
}

/// `E e^{-rT}(K - S_T)^+` through put-call parity.
pub fn euro_put(
    market: &MarketParams,
    model: &LevyModel,
    strike: f64,
    cfg: &FourierConfig,
) -> Result<f64> {
    let call = euro_call(market, model, strike, cfg)?;
    Ok(put_from_call(market, strike, call))
}

pub(crate) fn put_from_call(market: &MarketParams, strike: f64, call: f64) -> f64 {
    call - market.s0 * (-market.delta * market.t).exp() + strike * (-market.r * market.t).exp()
}

/// Calls over many strikes, evaluated in parallel. Each strike is priced
/// independently, so results do not depend on the thread count.
pub fn euro_call_batch(
    market: &MarketParams,
    model: &LevyModel,
    strikes: &[f64],
    cfg: &FourierConfig,
) -> Result<Vec<f64>> {
    let pricer = CallPricer::new(market, model, cfg)?;
    strikes.par_iter().map(|&k| pricer.call(k)).collect()
}

pub fn euro_put_batch(
    market: &MarketParams,
    model: &LevyModel,
    strikes: &[f64],
    cfg: &FourierConfig,
) -> Result<Vec<f64>> {
    let calls = euro_call_batch(market, model, strikes, cfg)?;
    Ok(strikes
        .iter()
        .zip(calls)
        .map(|(&k, c)| put_from_call(market, k, c))
        .collect())
}
