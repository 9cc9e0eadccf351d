mod common;

use common::*;
use levy_skew::{JumpFamily, LevyError, LevyModel};
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Composite Simpson on [a, b] with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn merton_exponent_matches_truncated_levy_khinchine_integral() {
    let (lambda, mu, dj, sigma) = (1.0, -0.1, 0.15, 0.2);
    let (r, delta) = (0.05, 0.0);
    let density = |y: f64| {
        lambda * (-(y - mu).powi(2) / (2.0 * dj * dj)).exp() / (dj * (2.0 * std::f64::consts::PI).sqrt())
    };
    let h = |y: f64| if y.abs() < 1.0 { y } else { 0.0 };
    // Split at +-1 so the truncation indicator never sits inside a panel.
    let integral = |f: &dyn Fn(f64) -> f64| {
        simpson(f, -4.0, -1.0, 4000) + simpson(f, -1.0, 1.0, 4000) + simpson(f, 1.0, 4.0, 4000)
    };
    let drift_h =
        r - delta - 0.5 * sigma * sigma - integral(&|y| (y.exp() - 1.0 - h(y)) * density(y));
    let z = 2.0;
    let oracle = drift_h * z
        + 0.5 * sigma * sigma * z * z
        + integral(&|y| ((z * y).exp() - 1.0 - z * h(y)) * density(y));

    let model = merton().mean_correct(r, delta).unwrap();
    let psi = model.char_exponent(c(z, 0.0)).unwrap();
    assert!((psi.re - oracle).abs() < 1e-11, "{} vs {oracle}", psi.re);
    assert_eq!(psi.im, 0.0);
}

#[test]
fn tilt_factorization_holds_pointwise() {
    for (name, model) in families() {
        let d = model.decomposition().unwrap();
        for i in 0..81 {
            let y = -2.0 + 0.05 * i as f64;
            if y.abs() < 1e-9 {
                continue;
            }
            let lhs = model.levy_density(y);
            let rhs = (d.beta * y).exp() * d.base.density(y);
            assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300), "{name} y={y}");
            // The base is even.
            let (a, b) = (d.base.density(y), d.base.density(-y));
            assert!((a - b).abs() <= 1e-14 * a.abs(), "{name} y={y}");
        }
    }
}

#[test]
fn dual_density_is_reflected_tilt() {
    for (name, model) in families() {
        let m = model.mean_correct(0.05, 0.02).unwrap();
        let dual = m.dual(0.05, 0.02).unwrap();
        for y in [-1.3, -0.4, -0.05, 0.07, 0.5, 1.1] {
            let expected = (-y as f64).exp() * m.levy_density(-y);
            let got = dual.levy_density(y);
            assert!((got - expected).abs() <= 1e-12 * expected.abs(), "{name} y={y}");
        }
    }
}

#[test]
fn strips_of_spec_examples() {
    let s = LevyModel::cgmy(0.0, 1.0, 4.0, 5.0, 0.5).unwrap().strip();
    assert_eq!((s.lo, s.hi), (-4.0, 5.0));
    let s = merton().strip();
    assert!(s.lo.is_infinite() && s.hi.is_infinite());
    let s = LevyModel::diffusion(0.2).unwrap().strip();
    assert!(s.lo.is_infinite() && s.hi.is_infinite());
    // Endpoints are open.
    let m = LevyModel::cgmy(0.0, 1.0, 4.0, 5.0, 0.5).unwrap();
    assert!(matches!(
        m.char_exponent(c(5.0, 0.0)),
        Err(LevyError::StripViolation { bound, .. }) if bound == 5.0
    ));
}

#[test]
fn meixner_exponent_blows_up_at_strip_edges() {
    let m = meixner();
    let s = m.strip();
    let near_hi = m.char_exponent(c(s.hi - 1e-6, 0.0)).unwrap().re;
    let near_lo = m.char_exponent(c(s.lo + 1e-6, 0.0)).unwrap().re;
    assert!(near_hi > 1.0 && near_lo > 1.0, "{near_lo} {near_hi}");
    assert!(m.char_exponent(c(s.hi, 0.0)).is_err());
}

#[test]
fn mean_correction_examples() {
    let d = LevyModel::diffusion(0.2).unwrap().mean_correct(0.05, 0.0).unwrap();
    assert!((d.drift - 0.03).abs() < 1e-15);
    let m = merton().mean_correct(0.04, 0.04).unwrap();
    assert!(m.char_exponent(c(1.0, 0.0)).unwrap().norm() < 1e-15);
    let g = LevyModel::cgmy(0.0, 1.0, 5.0, 10.0, 0.5)
        .unwrap()
        .mean_correct(0.05, 0.02)
        .unwrap();
    assert!((g.char_exponent(c(1.0, 0.0)).unwrap().re - 0.03).abs() < 1e-12);
    let bad = LevyModel::cgmy(0.0, 1.0, 5.0, 0.5, 0.5);
    // m <= 1 is rejected at construction or at correction.
    match bad {
        Ok(m) => assert!(matches!(m.mean_correct(0.05, 0.0), Err(LevyError::StripViolation { .. }))),
        Err(e) => assert!(matches!(e, LevyError::ParameterOutOfRange { .. } | LevyError::StripViolation { .. })),
    }
}

#[test]
fn dual_parameter_examples() {
    let sym = LevyModel::merton(0.2, 1.3, -0.01125, 0.15).unwrap();
    let d = sym.mean_correct(0.03, 0.03).unwrap().dual(0.03, 0.03).unwrap();
    match d.jumps {
        JumpFamily::Merton { lambda, mu, delta_j } => {
            assert!((lambda - 1.3).abs() < 1e-14);
            assert!((mu + 0.01125).abs() < 1e-16);
            assert_eq!(delta_j, 0.15);
        }
        _ => panic!(),
    }
    let d = LevyModel::cgmy(0.0, 1.0, 4.0, 5.0, 0.5).unwrap().dual(0.0, 0.0).unwrap();
    assert_eq!(d.jumps, JumpFamily::Cgmy { c: 1.0, g: 4.0, m: 5.0, y_exp: 0.5 });
    let up = LevyModel::merton(0.2, 1.0, 0.0225, 0.15).unwrap();
    assert!((up.beta().unwrap() - 1.0).abs() < 1e-14);
    match up.dual(0.05, 0.05).unwrap().jumps {
        JumpFamily::Merton { mu, .. } => assert!((mu + 0.045).abs() < 1e-15),
        _ => panic!(),
    }
}

#[test]
fn beta_examples() {
    assert_eq!(LevyModel::merton(0.0, 1.0, -0.01125, 0.15).unwrap().beta().unwrap(), -0.5);
    assert_eq!(LevyModel::cgmy(0.0, 1.0, 4.0, 5.0, 0.5).unwrap().beta().unwrap(), -0.5);
    assert!(matches!(LevyModel::diffusion(0.2).unwrap().beta(), Err(LevyError::NoJumps)));
}

#[test]
fn with_beta_examples() {
    for (name, model) in families() {
        let m = model.mean_correct(0.05, 0.02).unwrap();
        let same = m.with_beta(m.beta().unwrap()).unwrap();
        assert!(params_close(&same, &m, 1e-13), "{name}: {same:?} vs {m:?}");
        let sym = m.with_beta(-0.5).unwrap();
        assert!((sym.beta().unwrap() + 0.5).abs() < 1e-15, "{name}");
        let psi1 = sym.char_exponent(c(1.0, 0.0)).unwrap().re;
        assert!((psi1 - 0.03).abs() < 1e-12, "{name}");
        // The even part is untouched.
        let (b0, b1) = (m.decomposition().unwrap().base, sym.decomposition().unwrap().base);
        for y in [-0.7, -0.1, 0.2, 0.9] {
            assert!((b0.density(y) - b1.density(y)).abs() <= 1e-12 * b0.density(y), "{name}");
        }
    }
    let g = LevyModel::cgmy(0.0, 1.0, 4.0, 5.0, 0.5).unwrap().with_beta(-1.5).unwrap();
    assert_eq!(g.jumps, JumpFamily::Cgmy { c: 1.0, g: 3.0, m: 6.0, y_exp: 0.5 });
    assert!(matches!(
        cgmy().with_beta(7.0),
        Err(LevyError::ParameterOutOfRange { name: "m", .. })
    ));
}

#[test]
fn with_beta_mirror_equals_dual_when_rates_match() {
    for (name, model) in families() {
        let m = model.mean_correct(0.04, 0.04).unwrap();
        let mirror = m.with_beta(-1.0 - m.beta().unwrap()).unwrap();
        let dual = m.dual(0.04, 0.04).unwrap();
        assert!(params_close(&mirror, &dual, 1e-12), "{name}: {mirror:?} vs {dual:?}");
    }
}

#[test]
fn conjugate_symmetry() {
    for (name, model) in families() {
        for z in dual_grid(&model) {
            let a = model.char_exponent(z.conj()).unwrap();
            let b = model.char_exponent(z).unwrap().conj();
            assert!((a - b).norm() <= 1e-13 * b.norm().max(1.0), "{name} {z}");
        }
    }
}

#[test]
fn cgmy_limit_forms_are_continuous() {
    for y0 in [0.0, 1.0] {
        let at = LevyModel::cgmy(0.0, 0.7, 3.0, 6.0, y0).unwrap();
        let off = LevyModel::cgmy(0.0, 0.7, 3.0, 6.0, y0 + 1e-6).unwrap();
        for z in [c(0.5, 3.0), c(-1.0, 10.0), c(2.0, -1.0)] {
            let a = at.char_exponent(z).unwrap();
            let b = off.char_exponent(z).unwrap();
            assert!((a - b).norm() < 1e-4 * a.norm().max(1.0), "y={y0} z={z}: {a} {b}");
        }
    }
}

fn merton_strategy() -> impl Strategy<Value = LevyModel> {
    (0.0..0.5f64, 0.0..3.0f64, -0.3..0.3f64, 0.02..0.4f64)
        .prop_map(|(s, l, m, d)| LevyModel::merton(s, l, m, d).unwrap())
}

fn cgmy_strategy() -> impl Strategy<Value = LevyModel> {
    (0.0..0.3f64, 0.1..2.0f64, 0.5..15.0f64, 1.5..15.0f64, -0.9..1.8f64)
        .prop_map(|(s, c, g, m, y)| LevyModel::cgmy(s, c, g, m, y).unwrap())
}

fn meixner_strategy() -> impl Strategy<Value = LevyModel> {
    (0.0..0.3f64, 0.05..1.0f64, -2.5..1.5f64, 0.05..2.0f64)
        .prop_filter("dual must stay valid", |&(_, a, b, _)| (b + a).abs() < 3.0)
        .prop_map(|(s, a, b, d)| LevyModel::meixner(s, a, b, d).unwrap())
}

fn any_model() -> impl Strategy<Value = LevyModel> {
    prop_oneof![merton_strategy(), cgmy_strategy(), meixner_strategy()]
}

proptest! {
    #[test]
    fn exponent_vanishes_at_zero(model in any_model()) {
        let psi = model.char_exponent(c(0.0, 0.0)).unwrap();
        prop_assert_eq!(psi.norm(), 0.0);
    }

    #[test]
    fn corrected_exponent_hits_the_growth_rate(model in any_model(), r in 0.0..0.1f64, d in 0.0..0.1f64) {
        let m = model.mean_correct(r, d).unwrap();
        let psi1 = m.char_exponent(c(1.0, 0.0)).unwrap();
        prop_assert!((psi1.re - (r - d)).abs() <= 1e-12);
    }

    #[test]
    fn dual_is_an_involution(model in any_model(), r in 0.0..0.1f64, d in 0.0..0.1f64) {
        let m = model.mean_correct(r, d).unwrap();
        let back = m.dual(r, d).unwrap().dual(d, r).unwrap();
        prop_assert!(params_close(&back, &m, 1e-12), "{:?} vs {:?}", back, m);
    }

    #[test]
    fn dual_beta_law(model in any_model()) {
        let beta = model.beta().unwrap();
        let dual_beta = model.dual(0.03, 0.01).unwrap().beta().unwrap();
        prop_assert!((dual_beta + beta + 1.0).abs() <= 1e-12 * beta.abs().max(1.0));
    }

    #[test]
    fn dual_exponent_identity(model in any_model(), r in 0.0..0.1f64, d in 0.0..0.1f64) {
        let m = model.mean_correct(r, d).unwrap();
        let dual = m.dual(r, d).unwrap();
        let psi1 = m.char_exponent(c(1.0, 0.0)).unwrap();
        for z in dual_grid(&m) {
            let lhs = dual.char_exponent(z).unwrap();
            let rhs = m.char_exponent(1.0 - z).unwrap() - psi1;
            prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0), "z={}: {} vs {}", z, lhs, rhs);
        }
    }

    #[test]
    fn with_beta_round_trip(model in merton_strategy(), beta in -2.0..1.0f64) {
        let b0 = model.beta().unwrap();
        let there = model.with_beta(beta).unwrap();
        prop_assert!((there.beta().unwrap() - beta).abs() <= 1e-12 * beta.abs().max(1.0));
        let back = there.with_beta(b0).unwrap();
        prop_assert!(params_close(&back, &model.with_drift(back.drift), 1e-10));
    }
}
