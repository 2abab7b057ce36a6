//! Brute-force reference computations used to validate the closed forms.
//!
//! Three independent checks live here: the classical fundamental matrix of
//! Hamilton's equations, a split-step Fourier propagator for the
//! Schrödinger equation on a periodic grid, and discretized checks of the
//! commutator algebra of the generators `(1/2)(f d/dx + d/dx f)`.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::ode::{Dopri5, OdeOptions};
use crate::profiles::OscillatorProfile;
use crate::propagator::{GaussianState, SymplecticMap};

/// Probability density allowed at the edges of the box.
pub const CONTAINMENT: f64 = 1e-12;

fn oracle_options() -> OdeOptions {
    OdeOptions {
        rtol: 1e-12,
        atol: 1e-14,
        h_max: 0.05,
        max_steps: 10_000_000,
    }
}

/// Fundamental matrix of `x' = p / m`, `p' = -m w^2 x` from the start of the
/// profile domain to `t`.
pub fn fundamental_matrix(profile: &OscillatorProfile, t: f64) -> Result<SymplecticMap> {
    Ok(fundamental_trajectory(profile, &[t])?[0])
}

/// Fundamental matrix at each of the increasing times `times`.
pub fn fundamental_trajectory(profile: &OscillatorProfile, times: &[f64]) -> Result<Vec<SymplecticMap>> {
    let domain = profile.domain();
    let mut rhs = |t: f64, y: &[f64; 4]| {
        let s = profile.eval_unchecked(t);
        let k = s.mass * s.freq_sq;
        [y[2] / s.mass, y[3] / s.mass, -k * y[0], -k * y[1]]
    };
    let mut stepper = Dopri5::new(&mut rhs, domain.start, [1.0, 0.0, 0.0, 1.0], oracle_options());
    let mut out = Vec::with_capacity(times.len());
    let mut last = domain.start;
    for &t in times {
        domain.check(t)?;
        if t < last {
            return Err(Error::usage("fundamental matrix times must be increasing"));
        }
        stepper
            .advance_to(&mut rhs, t)
            .map_err(|f| Error::Stiffness { t: f.t, h: f.h })?;
        let y = stepper.y();
        out.push(SymplecticMap {
            a: y[0],
            b: y[1],
            c: y[2],
            d: y[3],
            time: t,
        });
        last = t;
    }
    Ok(out)
}

/// Uniform periodic grid `x_j = x_min + j dx`, `dx = (x_max - x_min) / n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridGeometry {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !n.is_power_of_two() || n < 8 {
            return Err(Error::usage(format!("grid size must be a power of two >= 8, got {n}")));
        }
        if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(Error::usage(format!("invalid grid box [{x_min}, {x_max}]")));
        }
        Ok(Self { x_min, x_max, n })
    }

    pub fn centered(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n)
    }

    /// Box `+-(|mean| + 10 sigma)` with the smallest power-of-two `n` giving
    /// `dx <= sigma / 16`.
    pub fn auto(state: &GaussianState) -> Result<Self> {
        let sigma = state.cov_xx.sqrt();
        let half = state.mean_x.abs() + 10.0 * sigma;
        let n = ((2.0 * half * 16.0 / sigma).ceil() as usize).next_power_of_two();
        Self::centered(half, n.max(8))
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n).map(|j| self.x(j))
    }

    /// Angular wavenumbers in FFT order.
    fn wavenumbers(&self) -> Vec<f64> {
        let base = 2.0 * PI / (self.x_max - self.x_min);
        let n = self.n as isize;
        (0..n)
            .map(|j| base * if j < n / 2 { j } else { j - n } as f64)
            .collect()
    }
}

/// First and second moments of a wavefunction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub cov_xx: f64,
    pub cov_xp: f64,
    pub cov_pp: f64,
}

impl Moments {
    pub fn of_gaussian(g: &GaussianState) -> Self {
        Self {
            mean_x: g.mean_x,
            mean_p: g.mean_p,
            cov_xx: g.cov_xx,
            cov_xp: g.cov_xp,
            cov_pp: g.cov_pp,
        }
    }

    pub fn max_abs_diff(&self, other: &Moments) -> f64 {
        [
            self.mean_x - other.mean_x,
            self.mean_p - other.mean_p,
            self.cov_xx - other.cov_xx,
            self.cov_xp - other.cov_xp,
            self.cov_pp - other.cov_pp,
        ]
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Sampled wavefunction on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridState {
    geometry: GridGeometry,
    amplitudes: Vec<Complex64>,
}

impl GridState {
    /// Wraps and normalizes samples; fails if the state is not contained in
    /// the box.
    pub fn new(geometry: GridGeometry, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != geometry.n {
            return Err(Error::GridMismatch);
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::usage("grid amplitudes must be finite"));
        }
        let mut state = Self { geometry, amplitudes };
        let norm = state.norm();
        if !(norm > 0.0) {
            return Err(Error::usage("grid state has zero norm"));
        }
        let scale = 1.0 / norm.sqrt();
        state.amplitudes.iter_mut().for_each(|a| *a *= scale);
        state.check_containment(0.0)?;
        Ok(state)
    }

    pub fn from_fn(geometry: GridGeometry, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(geometry, geometry.points().map(f).collect())
    }

    pub fn from_gaussian(geometry: GridGeometry, state: &GaussianState) -> Result<Self> {
        Self::from_fn(geometry, |x| state.wavefunction(x))
    }

    pub fn geometry(&self) -> GridGeometry {
        self.geometry
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `sum |psi|^2 dx`.
    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.geometry.dx()
    }

    /// Largest density in the outer `n / 64` samples on either side.
    pub fn edge_density(&self) -> f64 {
        let w = (self.geometry.n / 64).max(1);
        let n = self.geometry.n;
        self.amplitudes[..w]
            .iter()
            .chain(&self.amplitudes[n - w..])
            .fold(0.0, |m, a| m.max(a.norm_sqr()))
    }

    fn check_containment(&self, t: f64) -> Result<()> {
        let density = self.edge_density();
        if density >= CONTAINMENT {
            return Err(Error::BoxOverflow { t, density });
        }
        Ok(())
    }

    pub fn moments(&self) -> Moments {
        let g = self.geometry;
        let dx = g.dx();
        let mut spectrum = self.amplitudes.clone();
        FftPlanner::new().plan_fft_forward(g.n).process(&mut spectrum);
        let k = g.wavenumbers();
        // p psi = -i d/dx psi, spectrally
        let mut p_psi: Vec<Complex64> = spectrum.iter().zip(&k).map(|(s, &k)| s * k).collect();
        FftPlanner::new().plan_fft_inverse(g.n).process(&mut p_psi);
        let inv_n = 1.0 / g.n as f64;
        p_psi.iter_mut().for_each(|v| *v *= inv_n);

        let (mut sx, mut sxx, mut sp, mut spp, mut sxp) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (j, (a, pa)) in self.amplitudes.iter().zip(&p_psi).enumerate() {
            let x = g.x(j);
            let rho = a.norm_sqr();
            sx += x * rho;
            sxx += x * x * rho;
            let ap = a.conj() * pa;
            sp += ap.re;
            spp += pa.norm_sqr();
            sxp += x * ap.re;
        }
        let (mx, mp) = (sx * dx, sp * dx);
        Moments {
            mean_x: mx,
            mean_p: mp,
            cov_xx: sxx * dx - mx * mx,
            cov_xp: sxp * dx - mx * mp,
            cov_pp: spp * dx - mp * mp,
        }
    }
}

/// `|<psi1|psi2>|`.
pub fn fidelity(psi1: &GridState, psi2: &GridState) -> Result<f64> {
    if psi1.geometry != psi2.geometry {
        return Err(Error::GridMismatch);
    }
    let overlap: Complex64 = psi1
        .amplitudes
        .iter()
        .zip(&psi2.amplitudes)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok((overlap * psi1.geometry.dx()).norm())
}

struct SplitStep {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    k_sq: Vec<f64>,
    x_sq: Vec<f64>,
    scratch: Vec<Complex64>,
}

impl SplitStep {
    fn new(g: GridGeometry) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(g.n);
        let inverse = planner.plan_fft_inverse(g.n);
        let scratch = vec![Complex64::default(); forward.get_inplace_scratch_len()];
        Self {
            forward,
            inverse,
            k_sq: g.wavenumbers().iter().map(|k| k * k).collect(),
            x_sq: g.points().map(|x| x * x).collect(),
            scratch,
        }
    }

    fn potential(&self, psi: &mut [Complex64], stiffness: f64, h: f64) {
        for (a, x2) in psi.iter_mut().zip(&self.x_sq) {
            *a *= Complex64::from_polar(1.0, -0.5 * stiffness * x2 * h);
        }
    }

    fn kinetic(&mut self, psi: &mut [Complex64], mass: f64, h: f64) {
        self.forward.process_with_scratch(psi, &mut self.scratch);
        let inv_n = 1.0 / psi.len() as f64;
        for (a, k2) in psi.iter_mut().zip(&self.k_sq) {
            *a *= Complex64::from_polar(inv_n, -0.5 * k2 / mass * h);
        }
        self.inverse.process_with_scratch(psi, &mut self.scratch);
    }
}

/// Propagates `psi0` from the start of the profile domain to `t`.
pub fn grid_propagate(profile: &OscillatorProfile, psi0: &GridState, t: f64, steps: usize) -> Result<GridState> {
    grid_propagate_from(profile, psi0, profile.domain().start, t, steps)
}

/// Strang splitting `V(h/2) K(h) V(h/2)` from `t0` to `t1` with the mass and
/// frequency sampled at each step midpoint.
pub fn grid_propagate_from(
    profile: &OscillatorProfile,
    psi0: &GridState,
    t0: f64,
    t1: f64,
    steps: usize,
) -> Result<GridState> {
    let domain = profile.domain();
    domain.check(t0)?;
    domain.check(t1)?;
    if t1 < t0 {
        return Err(Error::usage("grid propagation runs forward in time"));
    }
    let mut psi = psi0.clone();
    if t1 == t0 {
        return Ok(psi);
    }
    if steps == 0 {
        return Err(Error::usage("at least one step is required"));
    }
    let h = (t1 - t0) / steps as f64;
    let mut split = SplitStep::new(psi.geometry);
    for i in 0..steps {
        let mid = t0 + (i as f64 + 0.5) * h;
        let s = profile.eval_unchecked(mid);
        let stiffness = s.mass * s.freq_sq;
        split.potential(&mut psi.amplitudes, stiffness, 0.5 * h);
        split.kinetic(&mut psi.amplitudes, s.mass, h);
        split.potential(&mut psi.amplitudes, stiffness, 0.5 * h);
        psi.check_containment(t0 + (i + 1) as f64 * h)?;
    }
    Ok(psi)
}

/// Residuals of the discretized generator algebra, with the grid step used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommutatorResiduals {
    /// `max || [G1, f2] phi - f1 f2' phi ||`
    pub residual1: f64,
    /// `max || [G1, G2] phi - G3 phi ||` with `f3 = f1 f2' - f2 f1'`
    pub residual2: f64,
    pub dx: f64,
}

// G_f phi = (1/2)(f D phi + D(f phi)) with periodic central differences D.
fn generator(f: &[f64], phi: &[Complex64], dx: f64) -> Vec<Complex64> {
    let d = |v: &[Complex64]| -> Vec<Complex64> {
        let n = v.len();
        (0..n)
            .map(|j| (v[(j + 1) % n] - v[(j + n - 1) % n]) / (2.0 * dx))
            .collect()
    };
    let f_phi: Vec<Complex64> = phi.iter().zip(f).map(|(p, f)| p * f).collect();
    let d_phi = d(phi);
    let d_f_phi = d(&f_phi);
    (0..phi.len()).map(|j| 0.5 * (f[j] * d_phi[j] + d_f_phi[j])).collect()
}

fn l2_norm(v: &[Complex64], dx: f64) -> f64 {
    (v.iter().map(|a| a.norm_sqr()).sum::<f64>() * dx).sqrt()
}

/// Checks `[G_f1, f2] = f1 f2'` and `[G_f1, G_f2] = G_f3` on Gaussian test
/// vectors, where `G_f = (i/2){f, p} = (1/2)(f d/dx + d/dx f)`. Each function
/// returns its value and derivative.
pub fn generator_commutator_check<F1, F2>(f1: F1, f2: F2, grid: &GridGeometry) -> Result<CommutatorResiduals>
where
    F1: Fn(f64) -> (f64, f64),
    F2: Fn(f64) -> (f64, f64),
{
    let dx = grid.dx();
    let xs: Vec<f64> = grid.points().collect();
    let (v1, d1): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| f1(x)).unzip();
    let (v2, d2): (Vec<f64>, Vec<f64>) = xs.iter().map(|&x| f2(x)).unzip();
    let v3: Vec<f64> = (0..grid.n).map(|j| v1[j] * d2[j] - v2[j] * d1[j]).collect();

    let width = grid.x_max - grid.x_min;
    let center = 0.5 * (grid.x_min + grid.x_max);
    let sigma = width / 40.0;
    let tests = [(0.0, 0.0), (-width / 8.0, 1.0), (width / 8.0, -2.0)];

    let mut out = CommutatorResiduals {
        residual1: 0.0,
        residual2: 0.0,
        dx,
    };
    for (shift, k) in tests {
        let phi: Vec<Complex64> = xs
            .iter()
            .map(|&x| {
                let u = x - center - shift;
                Complex64::from_polar((-u * u / (4.0 * sigma * sigma)).exp(), k * u)
            })
            .collect();
        let edge = |v: &[Complex64]| v[0].norm().max(v[grid.n - 1].norm());
        let products: [Vec<Complex64>; 3] = [&v1, &v2, &v3].map(|f| phi.iter().zip(f).map(|(p, f)| p * f).collect());
        if std::iter::once(&phi).chain(&products).any(|v| edge(v) >= CONTAINMENT) {
            let density = products.iter().map(|v| edge(v)).fold(edge(&phi), f64::max);
            return Err(Error::BoxOverflow { t: 0.0, density });
        }

        // [G1, f2] phi = G1(f2 phi) - f2 G1 phi
        let g1_phi = generator(&v1, &phi, dx);
        let g1_f2_phi = generator(&v1, &products[1], dx);
        let r1: Vec<Complex64> = (0..grid.n)
            .map(|j| g1_f2_phi[j] - v2[j] * g1_phi[j] - v1[j] * d2[j] * phi[j])
            .collect();

        let g2_phi = generator(&v2, &phi, dx);
        let g1g2 = generator(&v1, &g2_phi, dx);
        let g2g1 = generator(&v2, &g1_phi, dx);
        let g3 = generator(&v3, &phi, dx);
        let r2: Vec<Complex64> = (0..grid.n).map(|j| g1g2[j] - g2g1[j] - g3[j]).collect();

        out.residual1 = out.residual1.max(l2_norm(&r1, dx));
        out.residual2 = out.residual2.max(l2_norm(&r2, dx));
    }
    Ok(out)
}

/// Observed convergence order `log2(coarse / fine)` for a step halving.
pub fn observed_order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::TimeDomain;

    fn dom(t: f64) -> TimeDomain {
        TimeDomain::new(0.0, t).unwrap()
    }

    #[test]
    fn fundamental_matrix_rotation_and_free() {
        let p = OscillatorProfile::constant(1.0, 1.0, dom(2.0)).unwrap();
        assert_eq!(fundamental_matrix(&p, 0.0).unwrap().entries(), [1.0, 0.0, 0.0, 1.0]);
        let m = fundamental_matrix(&p, PI / 2.0).unwrap();
        let want = SymplecticMap {
            a: 0.0,
            b: 1.0,
            c: -1.0,
            d: 0.0,
            time: PI / 2.0,
        };
        assert!(m.max_abs_diff(&want) < 1e-9);

        let free = OscillatorProfile::constant(1.0, 0.0, dom(3.0)).unwrap();
        let m = fundamental_matrix(&free, 3.0).unwrap();
        assert!((m.b - 3.0).abs() < 1e-12 && (m.a - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fundamental_matrix_is_unimodular() {
        let p = OscillatorProfile::caldirola_kanai(1.0, 0.7, dom(5.0))
            .unwrap()
            .with_constant_frequency(1.3);
        let times: Vec<f64> = (1..=50).map(|i| i as f64 * 0.1).collect();
        for m in fundamental_trajectory(&p, &times).unwrap() {
            assert!((m.det() - 1.0).abs() < 1e-10);
        }
        assert!(matches!(fundamental_matrix(&p, 6.0), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn fidelity_basics() {
        let g = GridGeometry::centered(10.0, 512).unwrap();
        let ground = GridState::from_fn(g, |x| Complex64::new((-x * x / 2.0).exp(), 0.0)).unwrap();
        let excited = GridState::from_fn(g, |x| Complex64::new(x * (-x * x / 2.0).exp(), 0.0)).unwrap();
        assert!((fidelity(&ground, &ground).unwrap() - 1.0).abs() < 1e-12);
        let rotated = GridState::new(
            g,
            ground
                .amplitudes()
                .iter()
                .map(|a| a * Complex64::from_polar(1.0, 0.7))
                .collect(),
        )
        .unwrap();
        assert!((fidelity(&ground, &rotated).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&ground, &excited).unwrap() < 1e-10);

        let other = GridState::from_fn(GridGeometry::centered(10.0, 256).unwrap(), |x| {
            Complex64::new((-x * x / 2.0).exp(), 0.0)
        })
        .unwrap();
        assert!(matches!(fidelity(&ground, &other), Err(Error::GridMismatch)));
    }

    #[test]
    fn gaussian_moments_on_grid() {
        let g = GridGeometry::centered(20.0, 2048).unwrap();
        let s = GaussianState::pure(1.5, -0.8, 0.6, 0.35).unwrap();
        let psi = GridState::from_gaussian(g, &s).unwrap();
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!(psi.moments().max_abs_diff(&Moments::of_gaussian(&s)) < 1e-10);
    }

    #[test]
    fn auto_box_resolves_state() {
        let s = GaussianState::pure(2.0, 0.0, 0.25, 0.0).unwrap();
        let g = GridGeometry::auto(&s).unwrap();
        assert!(g.x_max >= 2.0 + 10.0 * 0.5 - 1e-12);
        assert!(g.dx() <= 0.5 / 16.0);
        GridState::from_gaussian(g, &s).unwrap();
    }

    #[test]
    fn uncontained_state_is_rejected() {
        let g = GridGeometry::centered(3.0, 256).unwrap();
        let s = GaussianState::pure(0.0, 0.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            GridState::from_gaussian(g, &s),
            Err(Error::BoxOverflow { .. })
        ));
    }

    #[test]
    fn zero_time_is_identity() {
        let p = OscillatorProfile::constant(1.0, 1.0, dom(1.0)).unwrap();
        let g = GridGeometry::centered(10.0, 256).unwrap();
        let psi = GridState::from_gaussian(g, &GaussianState::coherent(1.0, 0.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(grid_propagate(&p, &psi, 0.0, 10).unwrap(), psi);
    }

    #[test]
    fn free_gaussian_spreads() {
        let m = 1.0;
        let p = OscillatorProfile::constant(m, 0.0, dom(2.0)).unwrap();
        let g = GridGeometry::centered(20.0, 1024).unwrap();
        let var0 = 0.5;
        let psi = GridState::from_gaussian(g, &GaussianState::pure(0.0, 0.0, var0, 0.0).unwrap()).unwrap();
        let t = 2.0;
        let out = grid_propagate(&p, &psi, t, 200).unwrap();
        let want = var0 + t * t / (4.0 * var0 * m * m);
        assert!((out.moments().cov_xx - want).abs() < 1e-6);
    }

    #[test]
    fn coherent_state_follows_classical_orbit() {
        let p = OscillatorProfile::constant(1.0, 1.0, dom(3.0)).unwrap();
        let g = GridGeometry::centered(20.0, 1024).unwrap();
        let psi = GridState::from_gaussian(g, &GaussianState::coherent(1.0, 0.0, 1.0, 1.0).unwrap()).unwrap();
        let out = grid_propagate(&p, &psi, 3.0, 3000).unwrap();
        assert!((out.moments().mean_x - 3.0_f64.cos()).abs() < 1e-6);
    }

    #[test]
    fn norm_drift_over_many_steps() {
        let p = OscillatorProfile::caldirola_kanai(1.0, 0.2, dom(5.0))
            .unwrap()
            .with_constant_frequency(1.0);
        let g = GridGeometry::centered(20.0, 512).unwrap();
        let psi = GridState::from_gaussian(g, &GaussianState::coherent(1.0, 0.5, 1.0, 1.0).unwrap()).unwrap();
        let out = grid_propagate(&p, &psi, 5.0, 10_000).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn escaping_packet_overflows_the_box() {
        let p = OscillatorProfile::constant(1.0, 0.0, dom(10.0)).unwrap();
        let g = GridGeometry::centered(8.0, 256).unwrap();
        let psi = GridState::from_gaussian(g, &GaussianState::pure(0.0, 3.0, 0.5, 0.0).unwrap()).unwrap();
        assert!(matches!(
            grid_propagate(&p, &psi, 5.0, 500),
            Err(Error::BoxOverflow { .. })
        ));
    }

    #[test]
    fn equal_generators_commute() {
        let g = GridGeometry::centered(10.0, 256).unwrap();
        let f = |x: f64| (x * x, 2.0 * x);
        let r = generator_commutator_check(f, f, &g).unwrap();
        assert!(r.residual2 < 1e-12);
    }

    #[test]
    fn commutator_residuals_are_second_order() {
        for n in [256, 512] {
            let coarse = generator_commutator_check(
                |x| (x, 1.0),
                |x| (x * x, 2.0 * x),
                &GridGeometry::centered(10.0, n).unwrap(),
            )
            .unwrap();
            let fine = generator_commutator_check(
                |x| (x, 1.0),
                |x| (x * x, 2.0 * x),
                &GridGeometry::centered(10.0, 2 * n).unwrap(),
            )
            .unwrap();
            assert!((fine.dx * 2.0 - coarse.dx).abs() < 1e-15);
            assert!(observed_order(coarse.residual1, fine.residual1) > 1.9);
            assert!(observed_order(coarse.residual2, fine.residual2) > 1.9);
        }
    }

    #[test]
    fn translation_generator_residual_shrinks() {
        let check = |n| {
            generator_commutator_check(|_| (1.0, 0.0), |x| (x, 1.0), &GridGeometry::centered(10.0, n).unwrap()).unwrap()
        };
        let (coarse, fine) = (check(2048), check(4096));
        assert!(fine.residual1 < 1e-4 && fine.residual2 < 1e-3);
        assert!(observed_order(coarse.residual1, fine.residual1) > 1.9);
        assert!(observed_order(coarse.residual2, fine.residual2) > 1.9);
    }
}
