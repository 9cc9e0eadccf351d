//! Option pricing in exponential Lévy markets, put-call duality, and
//! skewness-premium diagnostics.
//!
//! * [`levy_models`]: Merton, CGMY and Meixner triplets, their cumulants,
//!   mean correction, the dual market, and the symmetry parameter beta.
//! * [`pricing_fourier`]: European calls and puts by damped Fourier inversion.
//! * [`pricing_oracles`]: Merton series and exact Monte Carlo for validation.
//! * [`skew_analytics`]: SK(x), the x% rule residual, duality residuals, beta scans.
//! * [`chain_diagnostics`]: spline-interpolated paired-strike reports on observed chains.

pub mod chain_diagnostics;
pub mod error;
pub mod levy_models;
pub mod model_file;
pub mod numfmt;
pub mod pricing_fourier;
pub mod pricing_oracles;
pub mod quadrature;
pub mod skew_analytics;
pub mod spline;

pub use error::{LevyError, Result};
pub use levy_models::{
    BetaDecomposition, ComplexStrip, JumpFamily, LevyModel, MarketParams, SymmetricBase,
};
pub use pricing_fourier::{euro_call, euro_put, FourierConfig};
pub use pricing_oracles::{mc_price, merton_series, McResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptionKind {
    Call,
    Put,
}
