//! Closed-form evolution operator built from a positive auxiliary solution.
//!
//! With `chi` solving the auxiliary equation for `k^2` in `{-1, 0, 1}` and
//! `alpha(t) = int_0^t dt' / (m chi^2)`, the evolution operator factors as
//!
//! ```text
//! U(t) = D(t)^+ S(t)^+ V(t) S(0) D(0)
//! D(t) = exp[(i/2) ln(chi) {x, p}]            dilatation
//! S(t) = exp[-(i/2) m chi chi' x^2]            quadratic phase (shear)
//! V(t) = exp[-i alpha (p^2 + k^2 x^2) / 2]     rotation / free / hyperbolic
//! ```
//!
//! and the Heisenberg operators are `x(t) = a x + b p`, `p(t) = c x + d p`.

use num_complex::Complex64;

use crate::auxode::{AuxiliarySolution, KBranch};
use crate::error::{Error, Result};
use crate::profiles::OscillatorProfile;
use crate::quadrature;

/// Linear map `(x, p) -> (a x + b p, c x + d p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticMap {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub time: f64,
}

impl SymplecticMap {
    pub fn identity(time: f64) -> Self {
        Self {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
            time,
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `self * rhs`: apply `rhs` first, then `self`. The result carries
    /// `self.time`.
    pub fn compose(&self, rhs: &SymplecticMap) -> SymplecticMap {
        SymplecticMap {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
            time: self.time,
        }
    }

    pub fn apply(&self, x: f64, p: f64) -> (f64, f64) {
        (self.a * x + self.b * p, self.c * x + self.d * p)
    }

    pub fn entries(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Largest entrywise difference.
    pub fn max_abs_diff(&self, other: &SymplecticMap) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }

    fn from_matrix(m: [[f64; 2]; 2], time: f64) -> Self {
        Self {
            a: m[0][0],
            b: m[0][1],
            c: m[1][0],
            d: m[1][1],
            time,
        }
    }
}

/// `cos(k alpha)`, `sin(k alpha)/k` and `k sin(k alpha)` for one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTrig {
    pub cos: f64,
    pub sin_over_k: f64,
    pub k_sin: f64,
}

impl KernelTrig {
    /// `k = 1`, `k = 0` (the analytic limit) or `k = i`.
    pub fn new(branch: KBranch, alpha: f64) -> Self {
        match branch {
            KBranch::Ermakov => {
                let (s, c) = alpha.sin_cos();
                Self {
                    cos: c,
                    sin_over_k: s,
                    k_sin: s,
                }
            }
            KBranch::Classical => Self {
                cos: 1.0,
                sin_over_k: alpha,
                k_sin: 0.0,
            },
            KBranch::Hyperbolic => {
                let (s, c) = (alpha.sinh(), alpha.cosh());
                Self {
                    cos: c,
                    sin_over_k: s,
                    k_sin: -s,
                }
            }
        }
    }

    /// General real wavenumber `k > 0`.
    pub fn for_wavenumber(k: f64, alpha: f64) -> Self {
        let (s, c) = (k * alpha).sin_cos();
        Self {
            cos: c,
            sin_over_k: s / k,
            k_sin: k * s,
        }
    }
}

/// `chi`, `chi'` and the mass at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxPoint {
    pub chi: f64,
    pub chi_dot: f64,
    pub mass: f64,
}

/// Heisenberg coefficients `(a, b, c, d)` from auxiliary data at `t` and `0`.
pub fn coefficient_map(trig: KernelTrig, now: AuxPoint, start: AuxPoint, time: f64) -> SymplecticMap {
    let KernelTrig {
        cos,
        sin_over_k: s,
        k_sin,
    } = trig;
    let (chi, chi0) = (now.chi, start.chi);
    let mv = now.mass * now.chi_dot;
    let mv0 = start.mass * start.chi_dot;
    SymplecticMap {
        a: (chi / chi0) * (cos - mv0 * chi0 * s),
        b: chi0 * chi * s,
        c: (mv / chi0 - mv0 / chi) * cos - k_sin / (chi0 * chi) - mv0 * mv * s,
        d: (chi0 / chi) * cos + chi0 * mv * s,
        time,
    }
}

/// Parameters of the five factors of `U(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagatorFactorization {
    pub branch: KBranch,
    /// `ln chi(t)`
    pub log_dilatation: f64,
    /// `m(t) chi(t) chi'(t)`
    pub shear: f64,
    /// `ln chi(0)`
    pub log_dilatation0: f64,
    /// `m(0) chi(0) chi'(0)`
    pub shear0: f64,
    /// `alpha(t) = int_0^t dt' / (m chi^2)`
    pub phase_integral: f64,
    pub time: f64,
}

impl PropagatorFactorization {
    pub fn identity(branch: KBranch, time: f64) -> Self {
        Self {
            branch,
            log_dilatation: 0.0,
            shear: 0.0,
            log_dilatation0: 0.0,
            shear0: 0.0,
            phase_integral: 0.0,
            time,
        }
    }

    /// Heisenberg map of the composed factors.
    pub fn symplectic_map(&self) -> SymplecticMap {
        let chi = self.log_dilatation.exp();
        let chi0 = self.log_dilatation0.exp();
        let k = KernelTrig::new(self.branch, self.phase_integral);
        let factors = [
            [[chi, 0.0], [0.0, 1.0 / chi]],
            [[1.0, 0.0], [self.shear, 1.0]],
            [[k.cos, k.sin_over_k], [-k.k_sin, k.cos]],
            [[1.0, 0.0], [-self.shear0, 1.0]],
            [[1.0 / chi0, 0.0], [0.0, chi0]],
        ];
        let m = factors.iter().fold([[1.0, 0.0], [0.0, 1.0]], |acc, f| mat_mul(&acc, f));
        SymplecticMap::from_matrix(m, self.time)
    }
}

fn mat_mul(x: &[[f64; 2]; 2], y: &[[f64; 2]; 2]) -> [[f64; 2]; 2] {
    [
        [
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ],
        [
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ],
    ]
}

/// An auxiliary solution bound to its profile, with the phase integral
/// tabulated at the solution nodes.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    profile: &'a OscillatorProfile,
    sol: &'a AuxiliarySolution,
    branch: KBranch,
    cumulative: Vec<f64>,
    start: AuxPoint,
}

impl<'a> Propagator<'a> {
    pub fn new(profile: &'a OscillatorProfile, sol: &'a AuxiliarySolution) -> Result<Self> {
        let branch = sol.branch().ok_or_else(|| {
            Error::usage(format!(
                "k^2 = {} is not one of -1, 0, 1; rescale the solution first",
                sol.k_squared()
            ))
        })?;
        profile.domain().check(0.0)?;
        profile.domain().check(sol.t_max())?;
        let mut cumulative = Vec::with_capacity(sol.times().len());
        cumulative.push(0.0);
        let mut acc = 0.0;
        for i in 0..sol.times().len() - 1 {
            acc += integrate_inverse_mass_chi2(profile, sol, i, 1.0);
            cumulative.push(acc);
        }
        let (chi0, chidot0) = sol.initial();
        let start = AuxPoint {
            chi: chi0,
            chi_dot: chidot0,
            mass: profile.eval(0.0)?.mass,
        };
        Ok(Self {
            profile,
            sol,
            branch,
            cumulative,
            start,
        })
    }

    pub fn branch(&self) -> KBranch {
        self.branch
    }

    pub fn solution(&self) -> &AuxiliarySolution {
        self.sol
    }

    /// `alpha(t) = int_0^t dt' / (m chi^2)`.
    pub fn phase_integral(&self, t: f64) -> Result<f64> {
        if !self.sol.contains(t) {
            return Err(Error::OutOfDomain {
                t,
                start: 0.0,
                end: self.sol.t_max(),
            });
        }
        let t = t.clamp(0.0, self.sol.t_max());
        let times = self.sol.times();
        let i = match times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return Ok(self.cumulative[i]),
            Err(i) => i - 1,
        };
        let s = (t - times[i]) / (times[i + 1] - times[i]);
        Ok(self.cumulative[i] + integrate_inverse_mass_chi2(self.profile, self.sol, i, s))
    }

    fn point(&self, t: f64) -> Result<AuxPoint> {
        let [chi, chi_dot, _] = self.sol.eval(t)?;
        Ok(AuxPoint {
            chi,
            chi_dot,
            mass: self.profile.eval(t)?.mass,
        })
    }

    pub fn heisenberg_map(&self, t: f64) -> Result<SymplecticMap> {
        let alpha = self.phase_integral(t)?;
        let now = self.point(t)?;
        Ok(coefficient_map(KernelTrig::new(self.branch, alpha), now, self.start, t))
    }

    pub fn factorize(&self, t: f64) -> Result<PropagatorFactorization> {
        let alpha = self.phase_integral(t)?;
        let now = self.point(t)?;
        Ok(PropagatorFactorization {
            branch: self.branch,
            log_dilatation: now.chi.ln(),
            shear: now.mass * now.chi * now.chi_dot,
            log_dilatation0: self.start.chi.ln(),
            shear0: self.start.mass * self.start.chi * self.start.chi_dot,
            phase_integral: alpha,
            time: t,
        })
    }
}

// int dt / (m chi^2) over the first fraction `upto` of step `i`, integrated
// in the step's unit variable.
fn integrate_inverse_mass_chi2(profile: &OscillatorProfile, sol: &AuxiliarySolution, i: usize, upto: f64) -> f64 {
    let times = sol.times();
    let (t0, h) = (times[i], times[i + 1] - times[i]);
    let f = |s: f64| {
        let chi = sol.chi_in_step(i, s);
        1.0 / (profile.eval_unchecked(t0 + s * h).mass * chi * chi)
    };
    let scale = f(0.0).abs().max(f(upto).abs()).max(1e-300);
    h * quadrature::integrate(f, 0.0, upto, 1e-14 * scale * upto)
}

/// `alpha(t)` for a profile and solution.
pub fn phase_integral(profile: &OscillatorProfile, sol: &AuxiliarySolution, t: f64) -> Result<f64> {
    Propagator::new(profile, sol)?.phase_integral(t)
}

/// Heisenberg-picture symplectic map at `t`.
pub fn heisenberg_map(profile: &OscillatorProfile, sol: &AuxiliarySolution, t: f64) -> Result<SymplecticMap> {
    Propagator::new(profile, sol)?.heisenberg_map(t)
}

/// Five-factor parameter bundle at `t`.
pub fn factorize(profile: &OscillatorProfile, sol: &AuxiliarySolution, t: f64) -> Result<PropagatorFactorization> {
    Propagator::new(profile, sol)?.factorize(t)
}

/// Pure or mixed Gaussian state. For pure states the wavefunction is
/// `exp(log_norm + i phase) exp[-(x - xm)^2 (1 - 2 i cov_xp) / (4 cov_xx) + i pm (x - xm)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub mean_x: f64,
    pub mean_p: f64,
    pub cov_xx: f64,
    pub cov_xp: f64,
    pub cov_pp: f64,
    pub log_norm: f64,
    pub phase: f64,
}

impl GaussianState {
    /// Normalized pure state; `cov_pp` follows from `det = 1/4`.
    pub fn pure(mean_x: f64, mean_p: f64, var_x: f64, cov_xp: f64) -> Result<Self> {
        if !(var_x > 0.0) || !var_x.is_finite() {
            return Err(Error::usage(format!("position variance must be positive, got {var_x}")));
        }
        if !(mean_x.is_finite() && mean_p.is_finite() && cov_xp.is_finite()) {
            return Err(Error::usage("Gaussian parameters must be finite"));
        }
        Ok(Self {
            mean_x,
            mean_p,
            cov_xx: var_x,
            cov_xp,
            cov_pp: (0.25 + cov_xp * cov_xp) / var_x,
            log_norm: -0.25 * (2.0 * std::f64::consts::PI * var_x).ln(),
            phase: 0.0,
        })
    }

    /// Displaced ground state of the oscillator with mass `m` and frequency `w`.
    pub fn coherent(mean_x: f64, mean_p: f64, mass: f64, omega: f64) -> Result<Self> {
        Self::pure(mean_x, mean_p, 1.0 / (2.0 * mass * omega), 0.0)
    }

    pub fn det(&self) -> f64 {
        self.cov_xx * self.cov_pp - self.cov_xp * self.cov_xp
    }

    /// Complex width `Q` with `psi ~ exp[i Q (x - xm)^2 / 2]`.
    pub fn width(&self) -> Complex64 {
        Complex64::new(self.cov_xp, 0.5) / self.cov_xx
    }

    pub fn wavefunction(&self, x: f64) -> Complex64 {
        let dx = x - self.mean_x;
        let q = self.width();
        let expo = Complex64::i() * (q * dx * dx * 0.5 + self.mean_p * dx + self.phase) + self.log_norm;
        expo.exp()
    }
}

// psi = exp(i [Q (x - q)^2 / 2 + p (x - q) + gamma]), Im Q > 0.
#[derive(Debug, Clone, Copy)]
struct Packet {
    width: Complex64,
    q: f64,
    p: f64,
    gamma: Complex64,
}

impl Packet {
    fn dilate(&mut self, eps: f64) {
        // (D psi)(x) = e^{eps/2} psi(e^eps x)
        let e = eps.exp();
        self.width *= e * e;
        self.q /= e;
        self.p *= e;
        self.gamma -= Complex64::new(0.0, 0.5 * eps);
    }

    fn shear(&mut self, s: f64) {
        // multiply by exp(-i s x^2 / 2)
        self.width -= s;
        self.gamma -= s * self.q * self.q * 0.5;
        self.p -= s * self.q;
    }

    fn kernel(&mut self, branch: KBranch, alpha: f64) {
        let k = KernelTrig::new(branch, alpha);
        let q1 = k.cos * self.q + k.sin_over_k * self.p;
        let p1 = -k.k_sin * self.q + k.cos * self.p;
        let z = k.sin_over_k * self.width + k.cos;
        let log_z = continuous_log(branch, alpha, self.width);
        self.width = (k.cos * self.width - k.k_sin) / z;
        self.gamma += 0.5 * (p1 * q1 - self.p * self.q) + Complex64::i() * 0.5 * log_z;
        self.q = q1;
        self.p = p1;
    }
}

// ln(cos + Q sin/k) continued from 0 along [0, alpha]; Im Q > 0 keeps the
// argument increasing monotonically.
fn continuous_log(branch: KBranch, alpha: f64, width: Complex64) -> Complex64 {
    let (turns, reduced) = match branch {
        KBranch::Ermakov => {
            let n = (alpha / std::f64::consts::PI).floor();
            (n, alpha - n * std::f64::consts::PI)
        }
        _ => (0.0, alpha),
    };
    let k = KernelTrig::new(branch, reduced);
    let z = k.sin_over_k * width + k.cos;
    Complex64::new(z.norm().ln(), z.im.atan2(z.re) + turns * std::f64::consts::PI)
}

/// Applies the factorized evolution operator to a Gaussian state. Means and
/// covariance follow the induced symplectic map `S` (`S Sigma S^T`); the
/// global phase is accumulated factor by factor.
pub fn evolve_gaussian(fact: &PropagatorFactorization, state: &GaussianState) -> GaussianState {
    let s = fact.symplectic_map();
    let (mx, mp) = s.apply(state.mean_x, state.mean_p);
    let (xx, xp, pp) = (state.cov_xx, state.cov_xp, state.cov_pp);
    let cov_xx = s.a * s.a * xx + 2.0 * s.a * s.b * xp + s.b * s.b * pp;
    let cov_xp = s.a * s.c * xx + (s.a * s.d + s.b * s.c) * xp + s.b * s.d * pp;
    let cov_pp = s.c * s.c * xx + 2.0 * s.c * s.d * xp + s.d * s.d * pp;

    let mut pk = Packet {
        width: state.width(),
        q: state.mean_x,
        p: state.mean_p,
        gamma: Complex64::new(state.phase, -state.log_norm),
    };
    pk.dilate(fact.log_dilatation0);
    pk.shear(fact.shear0);
    pk.kernel(fact.branch, fact.phase_integral);
    pk.shear(-fact.shear);
    pk.dilate(-fact.log_dilatation);

    GaussianState {
        mean_x: mx,
        mean_p: mp,
        cov_xx,
        cov_xp,
        cov_pp,
        log_norm: -pk.gamma.im,
        phase: pk.gamma.re,
    }
}
