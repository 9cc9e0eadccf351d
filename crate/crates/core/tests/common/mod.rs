#![allow(dead_code)]

use levy_skew::LevyModel;
use num_complex::Complex64;

pub fn merton() -> LevyModel {
    LevyModel::merton(0.2, 1.0, -0.1, 0.15).unwrap()
}

pub fn cgmy() -> LevyModel {
    LevyModel::cgmy(0.0, 1.0, 5.0, 10.0, 0.5).unwrap()
}

pub fn meixner() -> LevyModel {
    LevyModel::meixner(0.0, 0.3977, -1.494, 0.3462).unwrap()
}

pub fn families() -> Vec<(&'static str, LevyModel)> {
    vec![("merton", merton()), ("cgmy", cgmy()), ("meixner", meixner())]
}

/// One instance per family with `beta = -1/2`.
pub fn symmetric_families() -> Vec<(&'static str, LevyModel)> {
    vec![
        ("merton", LevyModel::merton(0.2, 1.0, -0.01125, 0.15).unwrap()),
        ("cgmy", LevyModel::cgmy(0.0, 1.0, 4.0, 5.0, 0.5).unwrap()),
        ("meixner", LevyModel::meixner(0.0, 0.3977, -0.19885, 0.3462).unwrap()),
    ]
}

/// 50 points `p + iq` with `p` inside both the strip and its reflection `1 - strip`.
pub fn dual_grid(model: &LevyModel) -> Vec<Complex64> {
    let s = model.strip();
    let lo = s.lo.max(1.0 - s.hi).max(-3.0);
    let hi = s.hi.min(1.0 - s.lo).min(4.0);
    let mut pts = Vec::with_capacity(50);
    for i in 0..5 {
        let p = lo + (hi - lo) * (i as f64 + 0.5) / 5.0;
        for j in 0..10 {
            let q = -20.0 + 40.0 * j as f64 / 9.0;
            pts.push(Complex64::new(p, q));
        }
    }
    pts
}

pub fn params_close(a: &LevyModel, b: &LevyModel, rel: f64) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= rel * x.abs().max(y.abs()).max(1.0);
    a.jumps.name() == b.jumps.name()
        && close(a.sigma, b.sigma)
        && close(a.drift, b.drift)
        && a
            .jumps
            .params()
            .iter()
            .zip(b.jumps.params())
            .all(|(&(_, x), (_, y))| close(x, y))
}

pub fn strike_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
