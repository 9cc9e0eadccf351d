//! Independent price oracles for the Merton jump-diffusion: the Poisson-mixture
//! closed form and exact terminal-law Monte Carlo.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Poisson, StandardNormal};
use rayon::prelude::*;
use libm::erfc;

use crate::error::{invalid, LevyError, Result};
use crate::levy_models::{JumpFamily, LevyModel, MarketParams};
use crate::OptionKind;

/// Paths per reduction block. Fixed, so the summation tree never depends on
/// how many workers run.
const MC_BLOCK: usize = 4096;

pub fn norm_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Black-Scholes-Merton price with continuous yield `q`.
pub fn black_scholes(kind: OptionKind, s: f64, k: f64, r: f64, q: f64, sigma: f64, t: f64) -> f64 {
    let df = (-r * t).exp();
    let fwd = s * ((r - q) * t).exp();
    let sd = sigma * t.sqrt();
    if sd == 0.0 {
        return match kind {
            OptionKind::Call => df * (fwd - k).max(0.0),
            OptionKind::Put => df * (k - fwd).max(0.0),
        };
    }
    let d1 = ((fwd / k).ln() + 0.5 * sd * sd) / sd;
    let d2 = d1 - sd;
    match kind {
        OptionKind::Call => df * (fwd * norm_cdf(d1) - k * norm_cdf(d2)),
        OptionKind::Put => df * (k * norm_cdf(-d2) - fwd * norm_cdf(-d1)),
    }
}

fn merton_params(model: &LevyModel) -> Result<(f64, f64, f64)> {
    match model.jumps {
        JumpFamily::Merton { lambda, mu, delta_j } => Ok((lambda, mu, delta_j)),
        JumpFamily::None => Ok((0.0, 0.0, 1.0)),
        other => Err(LevyError::WrongFamily {
            expected: "merton",
            got: other.name(),
        }),
    }
}

/// Merton's series: a Poisson mixture of Black-Scholes prices, summed over
/// `n = 0..=n_terms` jumps. Uses the market rates, so the model's own drift
/// is ignored (it is assumed mean-corrected).
pub fn merton_series(
    market: &MarketParams,
    model: &LevyModel,
    strike: f64,
    kind: OptionKind,
    n_terms: usize,
) -> Result<f64> {
    let (lambda, mu, delta_j) = merton_params(model)?;
    if n_terms < 1 {
        return Err(invalid("n_terms must be at least 1"));
    }
    let t = market.t;
    let sigma = model.sigma;
    let jump_growth = mu + 0.5 * delta_j * delta_j;
    let kbar = jump_growth.exp_m1();
    let intensity = lambda * (1.0 + kbar) * t;

    let mut weight = (-intensity).exp();
    let mut price = 0.0;
    for n in 0..=n_terms {
        if n > 0 {
            weight *= intensity / n as f64;
        }
        let nf = n as f64;
        let sigma_n = (sigma * sigma + nf * delta_j * delta_j / t).sqrt();
        let r_n = market.r - lambda * kbar + nf * jump_growth / t;
        price += weight * black_scholes(kind, market.s0, strike, r_n, market.delta, sigma_n, t);
    }
    Ok(price)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    pub std_error: f64,
    pub n_paths: usize,
    pub seed: u64,
}

/// Monte Carlo price from the exact terminal law
/// `X_T = drift·T + sigma sqrt(T) Z + sum_{j<=N} Y_j`, `N ~ Poisson(lambda T)`.
///
/// Path `i` draws from its own ChaCha stream `(seed, i)`.
pub fn mc_price(
    market: &MarketParams,
    model: &LevyModel,
    strike: f64,
    kind: OptionKind,
    n_paths: usize,
    seed: u64,
) -> Result<McResult> {
    let (lambda, mu, delta_j) = merton_params(model)?;
    if n_paths < 1000 {
        return Err(invalid(format!("n_paths must be at least 1000, got {n_paths}")));
    }
    if !(strike > 0.0) {
        return Err(invalid(format!("strike must be positive, got {strike}")));
    }
    let t = market.t;
    let df = (-market.r * t).exp();
    let mean_t = model.drift * t;
    let sd_t = model.sigma * t.sqrt();
    let poisson = if lambda > 0.0 {
        Some(Poisson::new(lambda * t).map_err(|e| invalid(format!("poisson: {e}")))?)
    } else {
        None
    };

    let payoff = |i: usize| -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let z: f64 = rng.sample(StandardNormal);
        let mut x = mean_t + sd_t * z;
        if let Some(p) = &poisson {
            let jumps: f64 = rng.sample(p);
            if jumps > 0.0 {
                let w: f64 = rng.sample(StandardNormal);
                x += jumps * mu + jumps.sqrt() * delta_j * w;
            }
        }
        let st = market.s0 * x.exp();
        df * match kind {
            OptionKind::Call => (st - strike).max(0.0),
            OptionKind::Put => (strike - st).max(0.0),
        }
    };

    let n_blocks = n_paths.div_ceil(MC_BLOCK);
    let blocks: Vec<(f64, f64)> = (0..n_blocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * MC_BLOCK;
            let hi = (lo + MC_BLOCK).min(n_paths);
            (lo..hi).map(payoff).fold((0.0, 0.0), |(s, s2), v| (s + v, s2 + v * v))
        })
        .collect();
    let sum = pairwise_sum(&blocks.iter().map(|b| b.0).collect::<Vec<_>>());
    let sum_sq = pairwise_sum(&blocks.iter().map(|b| b.1).collect::<Vec<_>>());

    let n = n_paths as f64;
    let estimate = sum / n;
    let var = ((sum_sq / n - estimate * estimate) * n / (n - 1.0)).max(0.0);
    Ok(McResult {
        estimate,
        std_error: (var / n).sqrt(),
        n_paths,
        seed,
    })
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}
