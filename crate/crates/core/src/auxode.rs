//! The auxiliary equation `[d/dt(m chi') + m w^2 chi] m chi^3 = k^2`.
//!
//! For `k^2 = 0` this is the classical equation of motion of the oscillator;
//! for `k^2 = 1` it is the Ermakov equation; `k^2 = -1` covers the case where
//! the transformed oscillator has imaginary frequency. Any other positive
//! `k^2` is reduced to `1` by [`rescale`].
//!
//! The equation is integrated in explicit form
//! `chi'' = -(m'/m) chi' - w^2 chi + k^2 / (m^2 chi^3)` and kept as a dense
//! solution. Over each accepted step `chi` is a quintic Hermite interpolant of
//! `(chi, chi', chi'')` at both ends and `chi'` one of `(chi', chi'', chi''')`;
//! `chi''` is the derivative of the latter, so it never divides rounding
//! error in `chi` by `h^2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::ode::{quintic_hermite, quintic_hermite_unit, Dopri5, OdeOptions};
use crate::profiles::OscillatorProfile;

/// Positivity floor; the dilatation `ln chi` is undefined below it.
pub const CHI_MIN: f64 = 1e-12;

// A collapsing step while chi is this small relative to its running maximum
// is read as reaching the horizon.
const HORIZON_FRACTION: f64 = 1e-3;

/// The three relevant values of `k^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KBranch {
    /// `k^2 = -1`
    Hyperbolic,
    /// `k^2 = 0`
    Classical,
    /// `k^2 = +1`
    Ermakov,
}

impl KBranch {
    pub const ALL: [KBranch; 3] = [KBranch::Classical, KBranch::Ermakov, KBranch::Hyperbolic];

    pub fn k_squared(self) -> f64 {
        match self {
            KBranch::Hyperbolic => -1.0,
            KBranch::Classical => 0.0,
            KBranch::Ermakov => 1.0,
        }
    }

    pub fn from_k_squared(k_sq: i64) -> Option<Self> {
        match k_sq {
            -1 => Some(KBranch::Hyperbolic),
            0 => Some(KBranch::Classical),
            1 => Some(KBranch::Ermakov),
            _ => None,
        }
    }
}

impl fmt::Display for KBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.k_squared() as i64)
    }
}

/// Dense positive solution `chi(t)` on `[0, t_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliarySolution {
    k_squared: f64,
    times: Vec<f64>,
    chi: Vec<f64>,
    chi_dot: Vec<f64>,
    chi_ddot: Vec<f64>,
    chi_dddot: Vec<f64>,
}

impl AuxiliarySolution {
    /// Builds a solution directly from node data `(chi, chi', chi'', chi''')`,
    /// e.g. a closed form sampled on a grid. Nodes must start at `t = 0`,
    /// increase strictly, and carry positive `chi`.
    pub fn from_nodes(k_squared: f64, times: Vec<f64>, nodes: Vec<[f64; 4]>) -> Result<Self> {
        let n = times.len();
        if n == 0 || nodes.len() != n {
            return Err(Error::usage("auxiliary node arrays must be non-empty and equal length"));
        }
        if times[0] != 0.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::usage("auxiliary node times must start at 0 and increase"));
        }
        if let Some(i) = nodes.iter().position(|v| !(v[0] > 0.0)) {
            return Err(Error::Positivity {
                what: "chi",
                t: times[i],
                value: nodes[i][0],
            });
        }
        let mut sol = Self::empty(k_squared);
        for (t, v) in times.into_iter().zip(nodes) {
            sol.push(t, v);
        }
        Ok(sol)
    }

    fn empty(k_squared: f64) -> Self {
        Self {
            k_squared,
            times: Vec::new(),
            chi: Vec::new(),
            chi_dot: Vec::new(),
            chi_ddot: Vec::new(),
            chi_dddot: Vec::new(),
        }
    }

    pub fn k_squared(&self) -> f64 {
        self.k_squared
    }

    /// The branch, if `k^2` is one of `-1, 0, 1`.
    pub fn branch(&self) -> Option<KBranch> {
        if self.k_squared == -1.0 {
            Some(KBranch::Hyperbolic)
        } else if self.k_squared == 0.0 {
            Some(KBranch::Classical)
        } else if self.k_squared == 1.0 {
            Some(KBranch::Ermakov)
        } else {
            None
        }
    }

    pub fn t_max(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// `(chi(0), chi'(0))`.
    pub fn initial(&self) -> (f64, f64) {
        (self.chi[0], self.chi_dot[0])
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn node_chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn node_chi_dot(&self) -> &[f64] {
        &self.chi_dot
    }

    pub fn contains(&self, t: f64) -> bool {
        let slack = 1e-12 * self.t_max().max(1.0);
        t >= -slack && t <= self.t_max() + slack
    }

    /// `(chi, chi', chi'')` from the dense interpolant.
    pub fn eval(&self, t: f64) -> Result<[f64; 3]> {
        if !self.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                start: 0.0,
                end: self.t_max(),
            });
        }
        Ok(self.eval_unchecked(t))
    }

    pub fn chi(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?[0])
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> [f64; 3] {
        let n = self.times.len();
        if n == 1 {
            return [self.chi[0], self.chi_dot[0], self.chi_ddot[0]];
        }
        let t = t.clamp(0.0, self.t_max());
        let i = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return [self.chi[i], self.chi_dot[i], self.chi_ddot[i]],
            Err(i) => i - 1,
        };
        self.segment(i, t)
    }

    fn segment(&self, i: usize, t: f64) -> [f64; 3] {
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let j = i + 1;
        let c = quintic_hermite(
            t0,
            t1,
            [self.chi[i], self.chi_dot[i], self.chi_ddot[i]],
            [self.chi[j], self.chi_dot[j], self.chi_ddot[j]],
            t,
        );
        let v = quintic_hermite(
            t0,
            t1,
            [self.chi_dot[i], self.chi_ddot[i], self.chi_dddot[i]],
            [self.chi_dot[j], self.chi_ddot[j], self.chi_dddot[j]],
            t,
        );
        [c[0], v[0], v[1]]
    }

    /// Node interval `[t_i, t_{i+1}]` boundaries, for quadrature.
    /// `chi` at local coordinate `s` in `[0, 1]` of the step starting at node `i`.
    pub(crate) fn chi_in_step(&self, i: usize, s: f64) -> f64 {
        let j = i + 1;
        quintic_hermite_unit(
            self.times[j] - self.times[i],
            [self.chi[i], self.chi_dot[i], self.chi_ddot[i]],
            [self.chi[j], self.chi_dot[j], self.chi_ddot[j]],
            s,
        )[0]
    }

    fn push(&mut self, t: f64, v: [f64; 4]) {
        self.times.push(t);
        self.chi.push(v[0]);
        self.chi_dot.push(v[1]);
        self.chi_ddot.push(v[2]);
        self.chi_dddot.push(v[3]);
    }
}

fn check_initial(profile: &OscillatorProfile, chi0: f64, chidot0: f64, t_max: f64) -> Result<()> {
    if !(chi0 > 0.0) || !chi0.is_finite() {
        return Err(Error::Positivity {
            what: "chi0",
            t: 0.0,
            value: chi0,
        });
    }
    if !chidot0.is_finite() {
        return Err(Error::usage("initial chi' must be finite"));
    }
    if !(t_max > 0.0) {
        return Err(Error::usage(format!("t_max must be positive, got {t_max}")));
    }
    profile.domain().check(0.0)?;
    profile.domain().check(t_max)?;
    Ok(())
}

/// Solves the auxiliary equation for an arbitrary real `k^2`.
///
/// Fails with [`Error::PositivityHorizon`] (carrying the solution up to the
/// last positive node) if `chi` reaches zero before `t_max`.
pub fn solve_auxiliary(
    profile: &OscillatorProfile,
    k_squared: f64,
    chi0: f64,
    chidot0: f64,
    t_max: f64,
    opts: &OdeOptions,
) -> Result<AuxiliarySolution> {
    check_initial(profile, chi0, chidot0, t_max)?;
    let mut rhs = |t: f64, y: &[f64; 2]| -> [f64; 2] {
        let s = profile.eval_unchecked(t);
        let (chi, v) = (y[0], y[1]);
        let mut acc = -(s.mass_rate / s.mass) * v - s.freq_sq * chi;
        if k_squared != 0.0 {
            acc += k_squared / (s.mass * s.mass * chi * chi * chi);
        }
        [v, acc]
    };

    // chi''' by differentiating the right-hand side along the solution.
    let jerk = |t: f64, chi: f64, v: f64, a: f64| -> f64 {
        let s = profile.eval_unchecked(t);
        let r = s.mass_rate / s.mass;
        let mut j = -(s.mass_accel / s.mass - r * r) * v - r * a - s.freq_sq_rate * chi - s.freq_sq * v;
        if k_squared != 0.0 {
            let m2c3 = s.mass * s.mass * chi * chi * chi;
            j -= k_squared * (2.0 * r + 3.0 * v / chi) / m2c3;
        }
        j
    };
    let node = |t: f64, y: [f64; 2], a: f64| [y[0], y[1], a, jerk(t, y[0], y[1], a)];

    let mut stepper = Dopri5::new(&mut rhs, 0.0, [chi0, chidot0], *opts);
    let mut sol = AuxiliarySolution::empty(k_squared);
    sol.push(0.0, node(0.0, [chi0, chidot0], stepper.dy()[1]));
    let mut chi_peak = chi0;

    while stepper.t() < t_max {
        match stepper.step(&mut rhs, t_max) {
            Ok(()) => {
                let (t, y, dy) = (stepper.t(), *stepper.y(), *stepper.dy());
                if !(y[0] > CHI_MIN) {
                    let t_star = locate_crossing(&sol, t, y, dy[1]);
                    return Err(Error::PositivityHorizon {
                        t: t_star,
                        partial: Box::new(sol),
                    });
                }
                chi_peak = chi_peak.max(y[0]);
                sol.push(t, node(t, y, dy[1]));
            }
            Err(fail) => {
                let chi_last = *sol.chi.last().unwrap();
                return Err(if chi_last < HORIZON_FRACTION * chi_peak {
                    Error::PositivityHorizon {
                        t: fail.t,
                        partial: Box::new(sol),
                    }
                } else {
                    Error::Stiffness { t: fail.t, h: fail.h }
                });
            }
        }
    }
    Ok(sol)
}

// Bisection for chi = CHI_MIN on the step that crossed it.
fn locate_crossing(sol: &AuxiliarySolution, t1: f64, y1: [f64; 2], a1: f64) -> f64 {
    let i = sol.times.len() - 1;
    let t0 = sol.times[i];
    let left = [sol.chi[i], sol.chi_dot[i], sol.chi_ddot[i]];
    let right = [y1[0], y1[1], a1];
    let (mut lo, mut hi) = (t0, t1);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if quintic_hermite(t0, t1, left, right, mid)[0] > CHI_MIN {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Classical equation of motion `d/dt(m chi') + m w^2 chi = 0`.
pub fn solve_classical(profile: &OscillatorProfile, chi0: f64, chidot0: f64, t_max: f64) -> Result<AuxiliarySolution> {
    solve_auxiliary(profile, 0.0, chi0, chidot0, t_max, &OdeOptions::default())
}

/// One of the three normalized branches; `k^2 = 0` is the classical equation.
pub fn solve_ermakov(
    profile: &OscillatorProfile,
    branch: KBranch,
    chi0: f64,
    chidot0: f64,
    t_max: f64,
) -> Result<AuxiliarySolution> {
    solve_auxiliary(
        profile,
        branch.k_squared(),
        chi0,
        chidot0,
        t_max,
        &OdeOptions::default(),
    )
}

/// `[d/dt(m chi') + m w^2 chi] m chi^3 - k^2` at `t`, using the profile's
/// analytic rates and the interpolant's second derivative.
pub fn residual(profile: &OscillatorProfile, sol: &AuxiliarySolution, t: f64) -> Result<f64> {
    let [chi, v, a] = sol.eval(t)?;
    let s = profile.eval(t)?;
    let bracket = s.mass_rate * v + s.mass * a + s.mass * s.freq_sq * chi;
    Ok(bracket * s.mass * chi.powi(3) - sol.k_squared)
}

/// `m (chi1 chi2' - chi2 chi1')`, conserved by pairs of classical solutions.
pub fn wronskian(
    profile: &OscillatorProfile,
    sol1: &AuxiliarySolution,
    sol2: &AuxiliarySolution,
    t: f64,
) -> Result<f64> {
    if sol1.k_squared != 0.0 || sol2.k_squared != 0.0 {
        return Err(Error::usage("the Wronskian is only conserved for k^2 = 0 solutions"));
    }
    let [c1, d1, _] = sol1.eval(t)?;
    let [c2, d2, _] = sol2.eval(t)?;
    Ok(profile.mass(t)? * (c1 * d2 - c2 * d1))
}

/// `chi -> chi / sqrt(k)`: maps a solution with parameter `k^2` to one with
/// parameter `k^2 / k^2`.
pub fn rescale(sol: &AuxiliarySolution, k: f64) -> Result<AuxiliarySolution> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::usage(format!("rescale factor must be positive, got {k}")));
    }
    let f = 1.0 / k.sqrt();
    let scale = |v: &[f64]| v.iter().map(|x| x * f).collect::<Vec<_>>();
    Ok(AuxiliarySolution {
        k_squared: sol.k_squared / (k * k),
        times: sol.times.clone(),
        chi: scale(&sol.chi),
        chi_dot: scale(&sol.chi_dot),
        chi_ddot: scale(&sol.chi_ddot),
        chi_dddot: scale(&sol.chi_dddot),
    })
}
