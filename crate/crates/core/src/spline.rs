//! Cubic splines with not-a-knot end conditions.

use crate::error::{Error, Result};

/// Interpolating cubic spline through `(t_i, y_i)` samples with analytic
/// first, second and third derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    // Second derivatives at the knots.
    curv: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n != values.len() {
            return Err(Error::usage("spline knots and values differ in length"));
        }
        if n < 4 {
            return Err(Error::usage("a cubic spline needs at least 4 samples"));
        }
        if knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::usage("spline samples must be finite"));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::usage("spline knots must be strictly increasing"));
        }

        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let slope: Vec<f64> = (0..n - 1).map(|i| (values[i + 1] - values[i]) / h[i]).collect();

        // Unknowns M_1..M_{n-2}; M_0 and M_{n-1} are eliminated with the
        // not-a-knot conditions (third derivative continuous at t_1, t_{n-2}).
        let m = n - 2;
        let mut sub = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut sup = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for k in 0..m {
            let i = k + 1;
            sub[k] = h[i - 1];
            diag[k] = 2.0 * (h[i - 1] + h[i]);
            sup[k] = h[i];
            rhs[k] = 6.0 * (slope[i] - slope[i - 1]);
        }
        // M_0 = ((h0 + h1) M_1 - h0 M_2) / h1
        diag[0] += h[0] * (h[0] + h[1]) / h[1];
        if m > 1 {
            sup[0] -= h[0] * h[0] / h[1];
        }
        // M_{n-1} = ((h_{n-2} + h_{n-3}) M_{n-2} - h_{n-2} M_{n-3}) / h_{n-3}
        let (a, b) = (h[n - 2], h[n - 3]);
        diag[m - 1] += a * (a + b) / b;
        if m > 1 {
            sub[m - 1] -= a * a / b;
        }

        let inner = solve_tridiagonal(&sub, &diag, &sup, &rhs);
        let mut curv = vec![0.0; n];
        curv[1..n - 1].copy_from_slice(&inner);
        curv[0] = ((h[0] + h[1]) * curv[1] - h[0] * curv[2]) / h[1];
        curv[n - 1] = ((a + b) * curv[n - 2] - a * curv[n - 3]) / b;

        Ok(Self { knots, values, curv })
    }

    pub fn start(&self) -> f64 {
        self.knots[0]
    }

    pub fn end(&self) -> f64 {
        *self.knots.last().unwrap()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Value and first three derivatives at `t`. `t` is clamped to the knot
    /// range; callers do their own domain checks.
    pub fn eval(&self, t: f64) -> [f64; 4] {
        let n = self.knots.len();
        let t = t.clamp(self.knots[0], self.knots[n - 1]);
        let i = match self.knots.binary_search_by(|k| k.partial_cmp(&t).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        };
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - t) / h;
        let b = (t - self.knots[i]) / h;
        let (m0, m1) = (self.curv[i], self.curv[i + 1]);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let v = a * y0 + b * y1 + ((a * a * a - a) * m0 + (b * b * b - b) * m1) * h * h / 6.0;
        let d = (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * b * b - 1.0) * m1) * h / 6.0;
        let dd = a * m0 + b * m1;
        let ddd = (m1 - m0) / h;
        [v, d, dd, ddd]
    }
}

fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let den = diag[i] - sub[i] * c[i - 1];
        c[i] = sup[i] / den;
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproduces_cubics_exactly() {
        let f = |t: f64| 2.0 - t + 0.5 * t * t - 0.3 * t * t * t;
        let knots: Vec<f64> = vec![0.0, 0.3, 0.5, 1.0, 1.4, 2.0];
        let vals = knots.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::new(knots, vals).unwrap();
        for &t in &[0.0, 0.1, 0.45, 1.2, 2.0] {
            let [v, d, dd, ddd] = s.eval(t);
            assert!((v - f(t)).abs() < 1e-12);
            assert!((d - (-1.0 + t - 0.9 * t * t)).abs() < 1e-11);
            assert!((dd - (1.0 - 1.8 * t)).abs() < 1e-10);
            assert!((ddd + 1.8).abs() < 1e-9);
        }
    }

    #[test]
    fn four_points_is_the_interpolating_cubic() {
        let f = |t: f64| t * t * t;
        let knots = vec![0.0, 1.0, 2.0, 3.0];
        let vals = knots.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::new(knots, vals).unwrap();
        assert!((s.eval(1.5)[0] - 3.375).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(CubicSpline::new(vec![0.0, 1.0, 2.0], vec![0.0; 3]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0, 1.0, 2.0], vec![0.0; 4]).is_err());
        assert!(CubicSpline::new(vec![0.0, 1.0, 2.0, f64::NAN], vec![0.0; 4]).is_err());
    }
}
