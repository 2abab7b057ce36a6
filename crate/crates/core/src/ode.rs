//! Adaptive Dormand-Prince 5(4) integration for small fixed-size systems.
//!
//! The stepper is deliberately low level: callers drive it one accepted step
//! at a time so they can record nodes, watch for sign changes and stop early.

/// Integrator tolerances and step limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step size. Dense-output consumers that differentiate
    /// the interpolant rely on this being small.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self {
            rtol: 1e-10,
            atol: 1e-12,
            h_max: 1e-2,
            max_steps: 5_000_000,
        }
    }
}

/// The step size dropped below the representable resolution around `t`, or
/// the step budget was exhausted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepFailure {
    pub t: f64,
    pub h: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// b - b*, fifth-order weights minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy<const N: usize>(y: &[f64; N], terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..N {
            out[i] += w * k[i];
        }
    }
    out
}

/// Dormand-Prince stepper with first-same-as-last reuse of the derivative.
#[derive(Debug, Clone)]
pub struct Dopri5<const N: usize> {
    t: f64,
    y: [f64; N],
    dy: [f64; N],
    h: f64,
    opts: OdeOptions,
    steps: usize,
}

impl<const N: usize> Dopri5<N> {
    pub fn new<F>(rhs: &mut F, t0: f64, y0: [f64; N], opts: OdeOptions) -> Self
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let dy = rhs(t0, &y0);
        let h = initial_step(rhs, t0, &y0, &dy, &opts);
        Self {
            t: t0,
            y: y0,
            dy,
            h,
            opts,
            steps: 0,
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    /// Derivative at the current point.
    pub fn dy(&self) -> &[f64; N] {
        &self.dy
    }

    /// Takes one accepted step toward `t_end`, never overshooting it.
    pub fn step<F>(&mut self, rhs: &mut F, t_end: f64) -> Result<(), StepFailure>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        let mut h = self.h.min(self.opts.h_max);
        let mut rejected = false;
        loop {
            self.steps += 1;
            if self.steps > self.opts.max_steps {
                return Err(StepFailure { t: self.t, h });
            }
            let remaining = t_end - self.t;
            let last = h >= remaining * (1.0 - 1e-12);
            let h_try = if last { remaining } else { h };
            let h_min = 16.0 * f64::EPSILON * self.t.abs().max(1.0);
            if h_try < h_min && !last {
                return Err(StepFailure { t: self.t, h: h_try });
            }

            let t = self.t;
            let y = &self.y;
            let k1 = self.dy;
            let k2 = rhs(t + C2 * h_try, &axpy(y, &[(h_try * A21, &k1)]));
            let k3 = rhs(t + C3 * h_try, &axpy(y, &[(h_try * A31, &k1), (h_try * A32, &k2)]));
            let k4 = rhs(
                t + C4 * h_try,
                &axpy(y, &[(h_try * A41, &k1), (h_try * A42, &k2), (h_try * A43, &k3)]),
            );
            let k5 = rhs(
                t + C5 * h_try,
                &axpy(
                    y,
                    &[
                        (h_try * A51, &k1),
                        (h_try * A52, &k2),
                        (h_try * A53, &k3),
                        (h_try * A54, &k4),
                    ],
                ),
            );
            let k6 = rhs(
                t + h_try,
                &axpy(
                    y,
                    &[
                        (h_try * A61, &k1),
                        (h_try * A62, &k2),
                        (h_try * A63, &k3),
                        (h_try * A64, &k4),
                        (h_try * A65, &k5),
                    ],
                ),
            );
            let y_new = axpy(
                y,
                &[
                    (h_try * A71, &k1),
                    (h_try * A73, &k3),
                    (h_try * A74, &k4),
                    (h_try * A75, &k5),
                    (h_try * A76, &k6),
                ],
            );
            let t_new = if last { t_end } else { t + h_try };
            let k7 = rhs(t_new, &y_new);

            let mut acc = 0.0;
            for i in 0..N {
                let e = h_try * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.opts.atol + self.opts.rtol * y[i].abs().max(y_new[i].abs());
                acc += (e / sc).powi(2);
            }
            let err = (acc / N as f64).sqrt();

            if err.is_finite() && err <= 1.0 && y_new.iter().all(|v| v.is_finite()) {
                let mut fac = if err == 0.0 { 5.0 } else { 0.9 * err.powf(-0.2) };
                fac = fac.clamp(0.2, 5.0);
                if rejected {
                    fac = fac.min(1.0);
                }
                // A short final step says nothing about the natural step size.
                if !last || h_try >= h {
                    self.h = (h_try * fac).min(self.opts.h_max);
                }
                self.t = t_new;
                self.y = y_new;
                self.dy = k7;
                return Ok(());
            }

            rejected = true;
            let fac = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.1
            };
            h = h_try * fac;
            self.h = h;
        }
    }

    /// Integrates to `t_end` discarding intermediate nodes.
    pub fn advance_to<F>(&mut self, rhs: &mut F, t_end: f64) -> Result<(), StepFailure>
    where
        F: FnMut(f64, &[f64; N]) -> [f64; N],
    {
        while self.t < t_end {
            self.step(rhs, t_end)?;
        }
        Ok(())
    }
}

fn rms<const N: usize>(v: &[f64; N], scale: &[f64; N]) -> f64 {
    let s: f64 = v.iter().zip(scale).map(|(a, b)| (a / b).powi(2)).sum();
    (s / N as f64).sqrt()
}

// Hairer, Norsett & Wanner starting step heuristic.
fn initial_step<F, const N: usize>(rhs: &mut F, t0: f64, y0: &[f64; N], f0: &[f64; N], opts: &OdeOptions) -> f64
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    let mut scale = [0.0; N];
    for i in 0..N {
        scale[i] = opts.atol + opts.rtol * y0[i].abs();
    }
    let d0 = rms(y0, &scale);
    let d1 = rms(f0, &scale);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let h0 = h0.min(opts.h_max);
    let y1 = axpy(y0, &[(h0, f0)]);
    let f1 = rhs(t0 + h0, &y1);
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms(&diff, &scale) / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(opts.h_max)
}

/// Quintic Hermite interpolation on `[t0, t1]` from value, first and second
/// derivative at both ends. Returns value and first two derivatives at `t`.
pub fn quintic_hermite(t0: f64, t1: f64, left: [f64; 3], right: [f64; 3], t: f64) -> [f64; 3] {
    let h = t1 - t0;
    quintic_hermite_unit(h, left, right, (t - t0) / h)
}

/// [`quintic_hermite`] in the unit variable `s = (t - t0) / h`, for callers
/// that already hold `s` and want to avoid rounding in `t`.
pub fn quintic_hermite_unit(h: f64, left: [f64; 3], right: [f64; 3], s: f64) -> [f64; 3] {
    let [y0, d0, a0] = left;
    let [y1, d1, a1] = right;
    // Work in the unit variable s; derivatives scale by powers of h.
    let p0 = y0;
    let p1 = d0 * h;
    let p2 = 0.5 * a0 * h * h;
    let dy = y1 - y0 - p1 - p2;
    let dd = d1 * h - p1 - 2.0 * p2;
    let da = a1 * h * h - 2.0 * p2;
    // Solve for c3, c4, c5 in p(s) = p0 + p1 s + p2 s^2 + c3 s^3 + c4 s^4 + c5 s^5.
    let c3 = 10.0 * dy - 4.0 * dd + 0.5 * da;
    let c4 = -15.0 * dy + 7.0 * dd - da;
    let c5 = 6.0 * dy - 3.0 * dd + 0.5 * da;
    let v = p0 + s * (p1 + s * (p2 + s * (c3 + s * (c4 + s * c5))));
    let dv = p1 + s * (2.0 * p2 + s * (3.0 * c3 + s * (4.0 * c4 + s * 5.0 * c5)));
    let ddv = 2.0 * p2 + s * (6.0 * c3 + s * (12.0 * c4 + s * 20.0 * c5));
    [v, dv / h, ddv / (h * h)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_matches_cosine() {
        let mut rhs = |_t: f64, y: &[f64; 2]| [y[1], -4.0 * y[0]];
        let mut st = Dopri5::new(&mut rhs, 0.0, [1.0, 0.0], OdeOptions::default());
        st.advance_to(&mut rhs, 3.0).unwrap();
        assert_eq!(st.t(), 3.0);
        assert!((st.y()[0] - (6.0f64).cos()).abs() < 1e-9);
        assert!((st.y()[1] + 2.0 * (6.0f64).sin()).abs() < 1e-9);
    }

    #[test]
    fn exponential_decay_with_loose_step_cap() {
        let opts = OdeOptions {
            h_max: 1.0,
            ..OdeOptions::default()
        };
        let mut rhs = |_t: f64, y: &[f64; 1]| [-y[0]];
        let mut st = Dopri5::new(&mut rhs, 0.0, [1.0], opts);
        st.advance_to(&mut rhs, 5.0).unwrap();
        assert!((st.y()[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn blow_up_reports_failure() {
        // y' = y^2 from y(0) = 1 blows up at t = 1.
        let mut rhs = |_t: f64, y: &[f64; 1]| [y[0] * y[0]];
        let mut st = Dopri5::new(&mut rhs, 0.0, [1.0], OdeOptions::default());
        let err = st.advance_to(&mut rhs, 2.0).unwrap_err();
        assert!(err.t < 1.0 && err.t > 0.99);
    }

    #[test]
    fn hermite_reproduces_quintics() {
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t.powi(3) + 0.25 * t.powi(5);
        let dp = |t: f64| -2.0 + 1.5 * t * t + 1.25 * t.powi(4);
        let ddp = |t: f64| 3.0 * t + 5.0 * t.powi(3);
        let (a, b) = (0.3, 1.1);
        for &t in &[0.3, 0.5, 0.77, 1.1] {
            let r = quintic_hermite(a, b, [p(a), dp(a), ddp(a)], [p(b), dp(b), ddp(b)], t);
            assert!((r[0] - p(t)).abs() < 1e-13);
            assert!((r[1] - dp(t)).abs() < 1e-12);
            assert!((r[2] - ddp(t)).abs() < 1e-11);
        }
    }
}
