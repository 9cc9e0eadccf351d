//! Natural cubic spline (zero second derivative at the end knots).

use crate::error::{invalid, LevyError, Result};

#[derive(Debug, Clone)]
pub struct NaturalSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Per-interval `(b, c, d)` of `y_i + b·dx + c·dx² + d·dx³`.
    coeffs: Vec<(f64, f64, f64)>,
}

pub const MIN_SPLINE_POINTS: usize = 4;

impl NaturalSpline {
    pub fn fit(points: &[(f64, f64)]) -> Result<Self> {
        let n = points.len();
        if n < MIN_SPLINE_POINTS {
            return Err(LevyError::InsufficientPoints {
                need: MIN_SPLINE_POINTS,
                got: n,
            });
        }
        let xs: Vec<f64> = points.iter().map(|p| p.0).collect();
        let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return Err(invalid("spline points must be finite"));
        }
        for (i, w) in xs.windows(2).enumerate() {
            if w[1] <= w[0] {
                return Err(invalid(format!(
                    "knots must be strictly increasing: x[{i}] = {} >= x[{}] = {}",
                    w[0],
                    i + 1,
                    w[1]
                )));
            }
        }

        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

        // Thomas algorithm for the interior second derivatives.
        let m_int = n - 2;
        let mut diag = vec![0.0; m_int];
        let mut rhs = vec![0.0; m_int];
        for j in 0..m_int {
            diag[j] = 2.0 * (h[j] + h[j + 1]);
            rhs[j] = 6.0 * (slope[j + 1] - slope[j]);
        }
        for j in 1..m_int {
            let w = h[j] / diag[j - 1];
            diag[j] -= w * h[j];
            rhs[j] -= w * rhs[j - 1];
        }
        let mut m = vec![0.0; n];
        for j in (0..m_int).rev() {
            let upper = if j + 1 < m_int { h[j + 1] * m[j + 2] } else { 0.0 };
            m[j + 1] = (rhs[j] - upper) / diag[j];
        }

        let coeffs = (0..n - 1)
            .map(|i| {
                let b = slope[i] - h[i] * (2.0 * m[i] + m[i + 1]) / 6.0;
                let c = 0.5 * m[i];
                let d = (m[i + 1] - m[i]) / (6.0 * h[i]);
                (b, c, d)
            })
            .collect();
        Ok(NaturalSpline { xs, ys, coeffs })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        lo <= x && x <= hi
    }

    /// Value at `x`; knots return their data exactly, and points outside the
    /// knot range are refused.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !self.contains(x) {
            return Err(LevyError::ExtrapolationRequest { x, lo, hi });
        }
        let last = self.xs.len() - 1;
        if x == self.xs[last] {
            return Ok(self.ys[last]);
        }
        // Interval i with xs[i] <= x < xs[i + 1].
        let i = self.xs.partition_point(|&k| k <= x) - 1;
        let dx = x - self.xs[i];
        let (b, c, d) = self.coeffs[i];
        Ok(self.ys[i] + dx * (b + dx * (c + dx * d)))
    }
}
