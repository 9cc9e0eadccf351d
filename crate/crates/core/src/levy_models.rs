//! Risk-neutral Lévy models as parametric triplets.
//!
//! A model is a drift, a diffusion volatility and a jump family. Each jump
//! family has a closed-form cumulant
//!
//! ```text
//! psi(z) = drift·z + sigma²z²/2 + J(z),   E exp(z X_t) = exp(t psi(z))
//! ```
//!
//! where `J` is the family's jump cumulant in its own natural compensation
//! (`J(0) = 0`). Different compensations only move a linear term into the
//! drift, and the drift is always fixed through [`LevyModel::mean_correct`],
//! so `psi(1) = r - delta` holds by construction whatever `J` looks like.
//!
//! Every family factors its Lévy density as `e^{beta y} p(y)` with `p` even;
//! `beta` is the symmetry parameter and `beta = -1/2` is the symmetric market.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use libm::tgamma as gamma;

use crate::error::{invalid, LevyError, Result};

/// Distance from Y = 0 or Y = 1 below which the CGMY cumulant switches to
/// its logarithmic limit form.
const CGMY_POLE_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum JumpFamily {
    /// Pure diffusion.
    None,
    /// Compound Poisson with Gaussian log-jumps N(mu, delta_j²) at rate `lambda`.
    Merton { lambda: f64, mu: f64, delta_j: f64 },
    /// Density `c e^{g y}|y|^{-1-y_exp}` for y < 0 and `c e^{-m y} y^{-1-y_exp}` for y > 0.
    Cgmy { c: f64, g: f64, m: f64, y_exp: f64 },
    /// Density `d_m e^{b_m y / a_m} / (y sinh(pi y / a_m))`.
    Meixner { a_m: f64, b_m: f64, d_m: f64 },
}

impl JumpFamily {
    pub fn name(&self) -> &'static str {
        match self {
            JumpFamily::None => "none",
            JumpFamily::Merton { .. } => "merton",
            JumpFamily::Cgmy { .. } => "cgmy",
            JumpFamily::Meixner { .. } => "meixner",
        }
    }

    /// Named parameters in a fixed order, used for display and comparisons.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            JumpFamily::None => vec![],
            JumpFamily::Merton { lambda, mu, delta_j } => {
                vec![("lambda", lambda), ("mu", mu), ("delta_j", delta_j)]
            }
            JumpFamily::Cgmy { c, g, m, y_exp } => {
                vec![("c", c), ("g", g), ("m", m), ("y", y_exp)]
            }
            JumpFamily::Meixner { a_m, b_m, d_m } => {
                vec![("a_m", a_m), ("b_m", b_m), ("d_m", d_m)]
            }
        }
    }

    fn validate(&self) -> Result<()> {
        fn need(ok: bool, name: &'static str, value: f64, bound: &str) -> Result<()> {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(LevyError::ParameterOutOfRange {
                    name,
                    value,
                    bound: bound.to_string(),
                })
            }
        }
        match *self {
            JumpFamily::None => Ok(()),
            JumpFamily::Merton { lambda, mu, delta_j } => {
                need(lambda >= 0.0, "lambda", lambda, "lambda >= 0")?;
                need(true, "mu", mu, "finite")?;
                need(delta_j > 0.0, "delta_j", delta_j, "delta_j > 0")
            }
            JumpFamily::Cgmy { c, g, m, y_exp } => {
                need(c > 0.0, "c", c, "c > 0")?;
                need(g > 0.0, "g", g, "g > 0")?;
                need(m > 0.0, "m", m, "m > 0")?;
                need(y_exp < 2.0, "y", y_exp, "y < 2")
            }
            JumpFamily::Meixner { a_m, b_m, d_m } => {
                need(a_m > 0.0, "a_m", a_m, "a_m > 0")?;
                need(b_m.abs() < PI, "b_m", b_m, "|b_m| < pi")?;
                need(d_m > 0.0, "d_m", d_m, "d_m > 0")
            }
        }
    }

    fn strip(&self) -> ComplexStrip {
        match *self {
            JumpFamily::None | JumpFamily::Merton { .. } => ComplexStrip::WHOLE_PLANE,
            JumpFamily::Cgmy { g, m, .. } => ComplexStrip { lo: -g, hi: m },
            JumpFamily::Meixner { a_m, b_m, .. } => ComplexStrip {
                lo: -(PI + b_m) / a_m,
                hi: (PI - b_m) / a_m,
            },
        }
    }

    /// Jump cumulant `J(z)`; the caller guarantees `z` is inside the strip.
    fn cumulant(&self, z: Complex64) -> Complex64 {
        match *self {
            JumpFamily::None => Complex64::new(0.0, 0.0),
            JumpFamily::Merton { lambda, mu, delta_j } => {
                lambda * ((mu * z + 0.5 * delta_j * delta_j * z * z).exp() - 1.0)
            }
            JumpFamily::Cgmy { c, g, m, y_exp } => {
                let mz = m - z;
                let gz = g + z;
                if y_exp.abs() < CGMY_POLE_EPS {
                    -c * ((mz / m).ln() + (gz / g).ln())
                } else if (y_exp - 1.0).abs() < CGMY_POLE_EPS {
                    c * (mz * mz.ln() - m * m.ln() + gz * gz.ln() - g * g.ln())
                } else {
                    c * gamma(-y_exp)
                        * (mz.powf(y_exp) - m.powf(y_exp) + gz.powf(y_exp) - g.powf(y_exp))
                }
            }
            JumpFamily::Meixner { a_m, b_m, d_m } => {
                let w = 0.5 * (a_m * z + b_m);
                2.0 * d_m * (ln_cos(Complex64::new(0.5 * b_m, 0.0)) - ln_cos(w))
            }
        }
    }

    fn density(&self, y: f64) -> f64 {
        match *self {
            JumpFamily::None => 0.0,
            JumpFamily::Merton { lambda, mu, delta_j } => {
                let u = (y - mu) / delta_j;
                lambda * (-0.5 * u * u).exp() / (delta_j * (2.0 * PI).sqrt())
            }
            JumpFamily::Cgmy { c, g, m, y_exp } => {
                if y < 0.0 {
                    c * (g * y).exp() * (-y).powf(-1.0 - y_exp)
                } else if y > 0.0 {
                    c * (-m * y).exp() * y.powf(-1.0 - y_exp)
                } else {
                    f64::INFINITY
                }
            }
            JumpFamily::Meixner { a_m, b_m, d_m } => {
                if y == 0.0 {
                    f64::INFINITY
                } else {
                    d_m * (b_m * y / a_m).exp() / (y * (PI * y / a_m).sinh())
                }
            }
        }
    }
}

/// Principal `ln cos(w)` for `|Re w| < pi/2`, stable for large `|Im w|`.
fn ln_cos(w: Complex64) -> Complex64 {
    // cos w = e^s (1 + e^{-2s}) / 2 with s = ∓ i w chosen so that Re s >= 0.
    let s = if w.im >= 0.0 {
        Complex64::new(w.im, -w.re)
    } else {
        Complex64::new(-w.im, w.re)
    };
    s + (1.0 + (-2.0 * s).exp()).ln() - LN_2
}

/// Open interval of `Re z` on which the exponential moment is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexStrip {
    pub lo: f64,
    pub hi: f64,
}

impl ComplexStrip {
    pub const WHOLE_PLANE: ComplexStrip = ComplexStrip {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    pub fn contains(&self, re: f64) -> bool {
        self.lo < re && re < self.hi
    }

    pub fn check(&self, re: f64) -> Result<()> {
        if self.contains(re) {
            Ok(())
        } else {
            let bound = if re <= self.lo { self.lo } else { self.hi };
            Err(LevyError::StripViolation {
                re,
                lo: self.lo,
                hi: self.hi,
                bound,
            })
        }
    }
}

/// Even base measure `p(y)dy` left after removing the exponential tilt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SymmetricBase {
    /// `scale · exp(-y²/(2 delta_j²)) / (delta_j sqrt(2 pi))`.
    Merton { scale: f64, delta_j: f64 },
    /// `c · exp(-eta |y|) |y|^{-1-y_exp}`.
    Cgmy { c: f64, eta: f64, y_exp: f64 },
    /// `d_m / (y sinh(pi y / a_m))`.
    Meixner { a_m: f64, d_m: f64 },
}

impl SymmetricBase {
    pub fn density(&self, y: f64) -> f64 {
        match *self {
            SymmetricBase::Merton { scale, delta_j } => {
                let u = y / delta_j;
                scale * (-0.5 * u * u).exp() / (delta_j * (2.0 * PI).sqrt())
            }
            SymmetricBase::Cgmy { c, eta, y_exp } => {
                let a = y.abs();
                c * (-eta * a).exp() * a.powf(-1.0 - y_exp)
            }
            SymmetricBase::Meixner { a_m, d_m } => d_m / (y * (PI * y / a_m).sinh()),
        }
    }
}

/// The factorization `Pi(dy) = e^{beta y} Pi_0(dy)` with `Pi_0` symmetric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaDecomposition {
    pub beta: f64,
    pub base: SymmetricBase,
}

impl BetaDecomposition {
    pub fn is_symmetric_market(&self, tol: f64) -> bool {
        (self.beta + 0.5).abs() <= tol
    }
}

/// Lévy triplet under the risk-neutral measure.
///
/// `drift` is relative to the family's own compensation (see the module
/// docs); it is meaningful only together with `jumps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyModel {
    pub drift: f64,
    pub sigma: f64,
    pub jumps: JumpFamily,
}

impl LevyModel {
    pub fn new(drift: f64, sigma: f64, jumps: JumpFamily) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(LevyError::ParameterOutOfRange {
                name: "sigma",
                value: sigma,
                bound: "sigma >= 0".into(),
            });
        }
        if !drift.is_finite() {
            return Err(invalid(format!("drift must be finite, got {drift}")));
        }
        jumps.validate()?;
        Ok(LevyModel { drift, sigma, jumps })
    }

    pub fn diffusion(sigma: f64) -> Result<Self> {
        Self::new(0.0, sigma, JumpFamily::None)
    }

    pub fn merton(sigma: f64, lambda: f64, mu: f64, delta_j: f64) -> Result<Self> {
        Self::new(0.0, sigma, JumpFamily::Merton { lambda, mu, delta_j })
    }

    pub fn cgmy(sigma: f64, c: f64, g: f64, m: f64, y_exp: f64) -> Result<Self> {
        Self::new(0.0, sigma, JumpFamily::Cgmy { c, g, m, y_exp })
    }

    pub fn meixner(sigma: f64, a_m: f64, b_m: f64, d_m: f64) -> Result<Self> {
        Self::new(0.0, sigma, JumpFamily::Meixner { a_m, b_m, d_m })
    }

    pub fn with_drift(mut self, drift: f64) -> Self {
        self.drift = drift;
        self
    }

    pub fn strip(&self) -> ComplexStrip {
        self.jumps.strip()
    }

    /// Cumulant `psi(z)` with `E e^{z X_t} = e^{t psi(z)}`.
    pub fn char_exponent(&self, z: Complex64) -> Result<Complex64> {
        self.strip().check(z.re)?;
        Ok(self.exponent_unchecked(z))
    }

    pub(crate) fn exponent_unchecked(&self, z: Complex64) -> Complex64 {
        self.drift * z + 0.5 * self.sigma * self.sigma * z * z + self.jumps.cumulant(z)
    }

    /// `psi(1)` minus the drift contribution.
    fn convexity_at_one(&self) -> Result<f64> {
        self.strip().check(1.0)?;
        let one = Complex64::new(1.0, 0.0);
        Ok(0.5 * self.sigma * self.sigma + self.jumps.cumulant(one).re)
    }

    /// Sets the drift so that `psi(1) = r - delta`.
    pub fn mean_correct(&self, r: f64, delta: f64) -> Result<Self> {
        self.drift_for_growth(r - delta)
    }

    fn drift_for_growth(&self, growth: f64) -> Result<Self> {
        let drift = growth - self.convexity_at_one()?;
        Ok(self.with_drift(drift))
    }

    /// Model of the dual market: `psi~(z) = psi(1 - z) - psi(1)`, same sigma,
    /// jump measure `e^{-y} Pi(-dy)`, drift corrected for the swapped rates.
    pub fn dual(&self, r: f64, delta: f64) -> Result<Self> {
        self.strip().check(1.0)?;
        let jumps = match self.jumps {
            JumpFamily::None => JumpFamily::None,
            JumpFamily::Merton { lambda, mu, delta_j } => JumpFamily::Merton {
                lambda: lambda * (mu + 0.5 * delta_j * delta_j).exp(),
                mu: -(mu + delta_j * delta_j),
                delta_j,
            },
            JumpFamily::Cgmy { c, g, m, y_exp } => JumpFamily::Cgmy {
                c,
                g: m - 1.0,
                m: g + 1.0,
                y_exp,
            },
            JumpFamily::Meixner { a_m, b_m, d_m } => JumpFamily::Meixner {
                a_m,
                b_m: -b_m - a_m,
                d_m,
            },
        };
        LevyModel::new(0.0, self.sigma, jumps)?.mean_correct(delta, r)
    }

    pub fn decomposition(&self) -> Result<BetaDecomposition> {
        match self.jumps {
            JumpFamily::None => Err(LevyError::NoJumps),
            JumpFamily::Merton { lambda, mu, delta_j } => {
                let beta = mu / (delta_j * delta_j);
                Ok(BetaDecomposition {
                    beta,
                    base: SymmetricBase::Merton {
                        scale: lambda * (-0.5 * beta * beta * delta_j * delta_j).exp(),
                        delta_j,
                    },
                })
            }
            JumpFamily::Cgmy { c, g, m, y_exp } => Ok(BetaDecomposition {
                beta: 0.5 * (g - m),
                base: SymmetricBase::Cgmy {
                    c,
                    eta: 0.5 * (g + m),
                    y_exp,
                },
            }),
            JumpFamily::Meixner { a_m, b_m, d_m } => Ok(BetaDecomposition {
                beta: b_m / a_m,
                base: SymmetricBase::Meixner { a_m, d_m },
            }),
        }
    }

    pub fn beta(&self) -> Result<f64> {
        self.decomposition().map(|d| d.beta)
    }

    /// Re-tilts the jump measure to `e^{beta_new y} p(y) dy`, holding the even
    /// factor `p` (mass included) fixed. The drift is re-corrected so that
    /// `psi(1)` keeps its current value.
    pub fn with_beta(&self, beta_new: f64) -> Result<Self> {
        if !beta_new.is_finite() {
            return Err(invalid(format!("beta must be finite, got {beta_new}")));
        }
        let growth = self.char_exponent(Complex64::new(1.0, 0.0))?.re;
        let beta = self.beta()?;
        let jumps = match self.jumps {
            JumpFamily::None => unreachable!("beta() rejects diffusions"),
            JumpFamily::Merton { lambda, delta_j, .. } => {
                let lambda_new =
                    lambda * (0.5 * (beta_new * beta_new - beta * beta) * delta_j * delta_j).exp();
                if !lambda_new.is_finite() {
                    return Err(LevyError::ParameterOutOfRange {
                        name: "lambda",
                        value: lambda_new,
                        bound: "finite intensity".into(),
                    });
                }
                JumpFamily::Merton {
                    lambda: lambda_new,
                    mu: beta_new * delta_j * delta_j,
                    delta_j,
                }
            }
            JumpFamily::Cgmy { c, g, m, y_exp } => {
                let eta = 0.5 * (g + m);
                let (g_new, m_new) = (eta + beta_new, eta - beta_new);
                if g_new <= 0.0 {
                    return Err(LevyError::ParameterOutOfRange {
                        name: "g",
                        value: g_new,
                        bound: "g = eta + beta > 0".into(),
                    });
                }
                if m_new <= 1.0 {
                    return Err(LevyError::ParameterOutOfRange {
                        name: "m",
                        value: m_new,
                        bound: "m = eta - beta > 1".into(),
                    });
                }
                JumpFamily::Cgmy {
                    c,
                    g: g_new,
                    m: m_new,
                    y_exp,
                }
            }
            JumpFamily::Meixner { a_m, d_m, .. } => {
                let b_new = beta_new * a_m;
                if b_new.abs() >= PI {
                    return Err(LevyError::ParameterOutOfRange {
                        name: "b_m",
                        value: b_new,
                        bound: "|b_m| < pi".into(),
                    });
                }
                if b_new + a_m >= PI {
                    return Err(LevyError::ParameterOutOfRange {
                        name: "b_m",
                        value: b_new,
                        bound: "b_m + a_m < pi".into(),
                    });
                }
                JumpFamily::Meixner {
                    a_m,
                    b_m: b_new,
                    d_m,
                }
            }
        };
        LevyModel::new(0.0, self.sigma, jumps)?.drift_for_growth(growth)
    }

    /// Lévy density at `y != 0`.
    pub fn levy_density(&self, y: f64) -> f64 {
        self.jumps.density(y)
    }
}

/// Spot (or future) level, rates and maturity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarketParams {
    pub s0: f64,
    pub r: f64,
    pub delta: f64,
    pub t: f64,
}

impl MarketParams {
    pub fn new(s0: f64, r: f64, delta: f64, t: f64) -> Result<Self> {
        if !(s0 > 0.0 && s0.is_finite()) {
            return Err(invalid(format!("s0 must be positive, got {s0}")));
        }
        if !(r >= 0.0 && r.is_finite()) {
            return Err(invalid(format!("r must be nonnegative, got {r}")));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(invalid(format!("delta must be nonnegative, got {delta}")));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(format!("t must be positive, got {t}")));
        }
        Ok(MarketParams { s0, r, delta, t })
    }

    /// Futures-style market: the underlying is the future, so `delta = r`.
    pub fn futures(f0: f64, r: f64, t: f64) -> Result<Self> {
        Self::new(f0, r, r, t)
    }

    pub fn forward(&self) -> f64 {
        self.s0 * ((self.r - self.delta) * self.t).exp()
    }

    /// The dual market prices with spot `strike`, and the rates swapped.
    pub fn dual(&self, strike: f64) -> Result<Self> {
        Self::new(strike, self.delta, self.r, self.t)
    }
}
