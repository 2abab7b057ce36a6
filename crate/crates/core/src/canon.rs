//! Canonical transformations at the level of quadratic-Hamiltonian
//! coefficients, exact-solvability classification, and the closed-form
//! configuration-space diffeomorphisms generated by `{f(x), p}/2`.

use crate::error::{Error, Result};
use crate::profiles::OscillatorProfile;

/// `H = A p^2/2 + B x^2/2 + C {x, p}/2` at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticHamiltonian {
    /// `A`, the inverse mass.
    pub inverse_mass: f64,
    /// `B`
    pub stiffness: f64,
    /// `C`
    pub cross: f64,
    pub time: f64,
}

impl QuadraticHamiltonian {
    /// The oscillator `p^2/2m + m w^2 x^2/2` at `t`.
    pub fn oscillator(profile: &OscillatorProfile, t: f64) -> Result<Self> {
        let s = profile.eval(t)?;
        Ok(Self {
            inverse_mass: 1.0 / s.mass,
            stiffness: s.mass * s.freq_sq,
            cross: 0.0,
            time: t,
        })
    }

    /// No `{x, p}` term.
    pub fn is_standard_form(&self) -> bool {
        self.cross == 0.0
    }
}

/// Dilatation exponent `eps(t)` with two time derivatives; `chi = e^eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilatationParameter {
    pub epsilon: f64,
    pub epsilon_dot: f64,
    pub epsilon_ddot: f64,
    pub time: f64,
}

impl DilatationParameter {
    pub fn identity(time: f64) -> Self {
        Self {
            epsilon: 0.0,
            epsilon_dot: 0.0,
            epsilon_ddot: 0.0,
            time,
        }
    }

    /// `eps = ln chi` from `(chi, chi', chi'')`.
    pub fn from_chi(chi: f64, chi_dot: f64, chi_ddot: f64, time: f64) -> Result<Self> {
        if !(chi > 0.0) {
            return Err(Error::Positivity {
                what: "chi",
                t: time,
                value: chi,
            });
        }
        let r = chi_dot / chi;
        Ok(Self {
            epsilon: chi.ln(),
            epsilon_dot: r,
            epsilon_ddot: chi_ddot / chi - r * r,
            time,
        })
    }

    /// `eps = ln(m0/m)/2`, the choice that makes `m e^{2 eps} = m0`.
    pub fn constant_mass(profile: &OscillatorProfile, m0: f64, t: f64) -> Result<Self> {
        let s = profile.eval(t)?;
        let r = s.mass_rate / s.mass;
        Ok(Self {
            epsilon: 0.5 * (m0 / s.mass).ln(),
            epsilon_dot: -0.5 * r,
            epsilon_ddot: -0.5 * (s.mass_accel / s.mass - r * r),
            time: t,
        })
    }

    pub fn chi(&self) -> f64 {
        self.epsilon.exp()
    }
}

/// `H -> H(e^eps x, e^-eps p) - eps' {x, p}/2`.
pub fn dilatation_transform(h: &QuadraticHamiltonian, d: &DilatationParameter) -> QuadraticHamiltonian {
    let e2 = (2.0 * d.epsilon).exp();
    QuadraticHamiltonian {
        inverse_mass: h.inverse_mass / e2,
        stiffness: h.stiffness * e2,
        cross: h.cross - d.epsilon_dot,
        time: h.time,
    }
}

/// Removes the `{x, p}` term of a dilatated oscillator with the quadratic
/// phase `exp[-i (eps' m e^{2 eps}) x^2 / 2]`, giving
/// `B = d/dt(m e^{2 eps} eps') + m e^{2 eps}(w^2 - eps'^2)`.
pub fn standardize(
    h_prime: &QuadraticHamiltonian,
    d: &DilatationParameter,
    profile: &OscillatorProfile,
) -> Result<QuadraticHamiltonian> {
    let s = profile.eval(d.time)?;
    let e2 = (2.0 * d.epsilon).exp();
    let (ed, edd) = (d.epsilon_dot, d.epsilon_ddot);
    // d/dt(m e^{2 eps} eps') = e^{2 eps} (m' eps' + 2 m eps'^2 + m eps'')
    let shear_rate = e2 * (s.mass_rate * ed + 2.0 * s.mass * ed * ed + s.mass * edd);
    let stiffness = h_prime.stiffness + shear_rate - s.mass * e2 * ed * ed;
    Ok(QuadraticHamiltonian {
        inverse_mass: h_prime.inverse_mass,
        stiffness,
        cross: 0.0,
        time: h_prime.time,
    })
}

/// `Omega^2 = eps'' - eps'^2 + w^2`; meaningful for the constant-mass choice
/// of [`DilatationParameter::constant_mass`].
pub fn effective_frequency_sq(profile: &OscillatorProfile, d: &DilatationParameter) -> Result<f64> {
    let s = profile.eval(d.time)?;
    Ok(d.epsilon_ddot - d.epsilon_dot * d.epsilon_dot + s.freq_sq)
}

/// `w^2(t) - [Omega0^2 + m''/2m - (m'/2m)^2]`; zero on the whole domain iff
/// the oscillator is canonically equivalent to a fixed one of frequency
/// `Omega0`.
pub fn solvability_residual(profile: &OscillatorProfile, omega0: f64, t: f64) -> Result<f64> {
    let s = profile.eval(t)?;
    Ok(s.freq_sq - (omega0 * omega0 + s.mass_shift()))
}

/// Outcome of scanning a profile for membership in the exactly solvable
/// class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub in_class: bool,
    pub omega0_best: f64,
    pub max_residual: f64,
}

/// Scans `samples + 1` evenly spaced times; `omega0_best` minimizes the
/// maximum residual over them.
pub fn classify(profile: &OscillatorProfile, samples: usize, tolerance: f64) -> Result<Classification> {
    let dom = profile.domain();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in dom.linspace(samples) {
        let s = profile.eval(t)?;
        let c = s.freq_sq - s.mass_shift();
        lo = lo.min(c);
        hi = hi.max(c);
    }
    let omega0_sq = (0.5 * (lo + hi)).max(0.0);
    let omega0_best = omega0_sq.sqrt();
    let max_residual = (hi - omega0_sq).abs().max((lo - omega0_sq).abs());
    Ok(Classification {
        in_class: max_residual <= tolerance,
        omega0_best,
        max_residual,
    })
}

/// Generator profile `f(x)` of the diffeomorphism `exp[eps f(x) d/dx]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiffeoKind {
    /// `f(x) = x`, the dilatation.
    Linear,
    /// `f(x) = x^2`
    Quadratic,
    /// `f(x) = e^{-lambda x}`, `lambda > 0`.
    Exponential { lambda: f64 },
}

impl DiffeoKind {
    pub fn exponential(lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::usage(format!("lambda must be positive, got {lambda}")));
        }
        Ok(DiffeoKind::Exponential { lambda })
    }

    /// The generator `f(x)`.
    pub fn generator(&self, x: f64) -> f64 {
        match *self {
            DiffeoKind::Linear => x,
            DiffeoKind::Quadratic => x * x,
            DiffeoKind::Exponential { lambda } => (-lambda * x).exp(),
        }
    }
}

/// Image of a point: `x' = F1(x)` and the momentum factor `F2(x)` with
/// `p' = sqrt(F2) p sqrt(F2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffeoImage {
    pub x_prime: f64,
    pub f2: f64,
}

/// Closed-form action of `exp[(i eps / 2) {f(x), p}]` on position and
/// momentum. `F2 = f(x) / f(F1(x))`, which equals `dx/dx'`.
pub fn diffeo_map(kind: DiffeoKind, eps: f64, x: f64) -> Result<DiffeoImage> {
    match kind {
        DiffeoKind::Linear => Ok(DiffeoImage {
            x_prime: eps.exp() * x,
            f2: (-eps).exp(),
        }),
        DiffeoKind::Quadratic => {
            let g = 1.0 - eps * x;
            if !((eps * x).abs() < 1.0) {
                return Err(Error::MapDomain {
                    x,
                    reason: format!("|eps x| < 1 required; singular at x = 1/eps = {}", 1.0 / eps),
                });
            }
            Ok(DiffeoImage {
                x_prime: x / g,
                f2: g * g,
            })
        }
        DiffeoKind::Exponential { lambda } => {
            let e = (lambda * x).exp();
            let arg = e + eps * lambda;
            if !(arg > 0.0) || !arg.is_finite() {
                return Err(Error::MapDomain {
                    x,
                    reason: format!("e^(lambda x) + eps lambda = {arg} must be positive"),
                });
            }
            Ok(DiffeoImage {
                x_prime: arg.ln() / lambda,
                f2: arg / e,
            })
        }
    }
}

/// Whether the uniform sufficient condition `|eps lambda| < 1` holds for the
/// exponential kind. The pointwise condition checked by [`diffeo_map`] is
/// weaker; callers may warn when this one fails.
pub fn uniform_condition_holds(kind: DiffeoKind, eps: f64) -> bool {
    match kind {
        DiffeoKind::Exponential { lambda } => (eps * lambda).abs() < 1.0,
        _ => true,
    }
}

/// Applies the map with `eps1` and then with `eps2`; equals the map with
/// `eps1 + eps2` by the one-parameter group property.
pub fn flow_compose(kind: DiffeoKind, eps1: f64, eps2: f64, x: f64) -> Result<f64> {
    let mid = diffeo_map(kind, eps1, x)?.x_prime;
    Ok(diffeo_map(kind, eps2, mid)?.x_prime)
}

/// Metric `g = F2^{-2}` of the line after pushing the flat free particle
/// through the diffeomorphism.
pub fn induced_metric(kind: DiffeoKind, eps: f64, x: f64) -> Result<f64> {
    let f2 = diffeo_map(kind, eps, x)?.f2;
    Ok(1.0 / (f2 * f2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::TimeDomain;

    fn dom(t: f64) -> TimeDomain {
        TimeDomain::new(0.0, t).unwrap()
    }

    #[test]
    fn dilatation_examples() {
        let p = OscillatorProfile::constant(1.0, 1.0, dom(1.0)).unwrap();
        let h = QuadraticHamiltonian::oscillator(&p, 0.0).unwrap();
        assert_eq!(dilatation_transform(&h, &DilatationParameter::identity(0.0)), h);

        let d = DilatationParameter {
            epsilon: 2f64.ln(),
            ..DilatationParameter::identity(0.0)
        };
        let hp = dilatation_transform(&h, &d);
        assert!((hp.inverse_mass - 0.25).abs() < 1e-15);
        assert!((hp.stiffness - 4.0).abs() < 1e-15);
        assert_eq!(hp.cross, 0.0);

        let free = OscillatorProfile::constant(1.0, 0.0, dom(1.0)).unwrap();
        let h = QuadraticHamiltonian::oscillator(&free, 0.0).unwrap();
        let d = DilatationParameter {
            epsilon_dot: 3.0,
            ..DilatationParameter::identity(0.0)
        };
        let hp = dilatation_transform(&h, &d);
        assert_eq!((hp.inverse_mass, hp.stiffness, hp.cross), (1.0, 0.0, -3.0));
        assert!(!hp.is_standard_form());
    }

    #[test]
    fn standardize_examples() {
        let p = OscillatorProfile::constant(1.0, 1.0, dom(1.0)).unwrap();
        let h = QuadraticHamiltonian::oscillator(&p, 0.3).unwrap();
        let id = DilatationParameter::identity(0.3);
        assert_eq!(standardize(&dilatation_transform(&h, &id), &id, &p).unwrap(), h);

        // eps = -t/2 at t = 0
        let h = QuadraticHamiltonian::oscillator(&p, 0.0).unwrap();
        let d = DilatationParameter {
            epsilon: 0.0,
            epsilon_dot: -0.5,
            epsilon_ddot: 0.0,
            time: 0.0,
        };
        let hs = standardize(&dilatation_transform(&h, &d), &d, &p).unwrap();
        assert!((hs.stiffness - 1.25).abs() < 1e-15);
        assert_eq!(hs.inverse_mass, 1.0);
        assert!(hs.is_standard_form());
    }

    #[test]
    fn effective_frequency_examples() {
        let p = OscillatorProfile::constant(2.0, 1.5, dom(1.0)).unwrap();
        let w = effective_frequency_sq(&p, &DilatationParameter::identity(0.5)).unwrap();
        assert_eq!(w, 2.25);

        let g = 0.6;
        let p = OscillatorProfile::caldirola_kanai(1.0, g, dom(4.0))
            .unwrap()
            .with_constant_frequency(1.0);
        for t in dom(4.0).linspace(20) {
            let d = DilatationParameter::constant_mass(&p, 1.0, t).unwrap();
            assert!((d.epsilon + g * t / 2.0).abs() < 1e-14);
            let w = effective_frequency_sq(&p, &d).unwrap();
            assert!((w - (1.0 - g * g / 4.0)).abs() < 1e-14);
        }
    }

    #[test]
    fn solvable_family_has_constant_effective_frequency() {
        let p = OscillatorProfile::solvable_mass_family(1.5, 0.7, 0.4, 0.8, dom(3.0))
            .unwrap()
            .solvable_frequency(1.2)
            .unwrap();
        for t in dom(3.0).linspace(100) {
            let d = DilatationParameter::constant_mass(&p, 1.5, t).unwrap();
            assert!((effective_frequency_sq(&p, &d).unwrap() - 1.44).abs() < 1e-10);
            assert!(solvability_residual(&p, 1.2, t).unwrap().abs() < 1e-10);
        }
    }

    #[test]
    fn solvability_residual_examples() {
        let p = OscillatorProfile::constant(1.0, 1.3, dom(2.0)).unwrap();
        assert_eq!(solvability_residual(&p, 1.3, 0.4).unwrap(), 0.0);

        let w = (1.0f64 + 0.25).sqrt();
        let p = OscillatorProfile::caldirola_kanai(1.0, 1.0, dom(5.0))
            .unwrap()
            .with_constant_frequency(w);
        for t in dom(5.0).linspace(50) {
            assert!(solvability_residual(&p, 1.0, t).unwrap().abs() < 1e-12);
        }
        let c = classify(&p, 200, 1e-9).unwrap();
        assert!(c.in_class);
        assert!((c.omega0_best - 1.0).abs() < 1e-12);

        let ramp = OscillatorProfile::constant(1.0, 1.0, dom(2.0))
            .unwrap()
            .with_frequency_sq(crate::profiles::TimeLaw::Polynomial(vec![1.0, 2.0, 1.0]))
            .unwrap();
        let c = classify(&ramp, 200, 1e-9).unwrap();
        assert!(!c.in_class);
        assert!((c.max_residual - 4.0).abs() < 1e-12);
    }

    #[test]
    fn diffeo_examples() {
        for kind in [
            DiffeoKind::Linear,
            DiffeoKind::Quadratic,
            DiffeoKind::Exponential { lambda: 0.7 },
        ] {
            let img = diffeo_map(kind, 0.0, 0.37).unwrap();
            assert!((img.x_prime - 0.37).abs() < 1e-15);
            assert!((img.f2 - 1.0).abs() < 1e-15);
            assert!((induced_metric(kind, 0.0, 0.37).unwrap() - 1.0).abs() < 1e-15);
        }
        let img = diffeo_map(DiffeoKind::Quadratic, 0.5, 1.0).unwrap();
        assert_eq!((img.x_prime, img.f2), (2.0, 0.25));
        assert_eq!(induced_metric(DiffeoKind::Quadratic, 0.5, 1.0).unwrap(), 16.0);

        let e = DiffeoKind::exponential(1.0).unwrap();
        let img = diffeo_map(e, 0.5, 0.0).unwrap();
        assert!((img.x_prime - 0.405465).abs() < 1e-6);
        assert!((img.f2 - 1.5).abs() < 1e-15);
        assert!((induced_metric(e, 0.5, 0.0).unwrap() - 4.0 / 9.0).abs() < 1e-15);

        let img = diffeo_map(DiffeoKind::Linear, 0.3, 2.0).unwrap();
        assert!((img.x_prime - 2.0 * 0.3f64.exp()).abs() < 1e-15);
        assert!((img.f2 - (-0.3f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn diffeo_domain_errors() {
        match diffeo_map(DiffeoKind::Quadratic, 0.5, 2.0) {
            Err(Error::MapDomain { reason, .. }) => assert!(reason.contains("1/eps = 2")),
            other => panic!("{other:?}"),
        }
        let e = DiffeoKind::exponential(2.0).unwrap();
        assert!(diffeo_map(e, -1.0, -1.0).is_err());
        // |eps lambda| >= 1 yet the pointwise condition holds at x = 1.
        assert!(diffeo_map(e, -1.0, 1.0).is_ok());
        assert!(!uniform_condition_holds(e, -1.0));
        assert!(DiffeoKind::exponential(0.0).is_err());
    }

    #[test]
    fn flow_composition_examples() {
        let x = flow_compose(DiffeoKind::Linear, 0.2, 0.5, 1.3).unwrap();
        assert!((x - 1.3 * 0.7f64.exp()).abs() < 1e-15);
        let x = flow_compose(DiffeoKind::Quadratic, 0.2, 0.2, 1.0).unwrap();
        assert!((x - 5.0 / 3.0).abs() < 1e-15);
        let x = flow_compose(DiffeoKind::exponential(1.0).unwrap(), 0.3, 0.4, 0.0).unwrap();
        assert!((x - 1.7f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn f2_is_inverse_jacobian() {
        let kinds = [
            DiffeoKind::Linear,
            DiffeoKind::Quadratic,
            DiffeoKind::exponential(0.8).unwrap(),
            DiffeoKind::exponential(2.5).unwrap(),
        ];
        let h = 1e-5;
        for kind in kinds {
            for &(eps, x) in &[(0.3, 0.4), (-0.2, 1.1), (0.15, -0.9)] {
                let img = diffeo_map(kind, eps, x).unwrap();
                let fwd = diffeo_map(kind, eps, x + h).unwrap().x_prime;
                let bwd = diffeo_map(kind, eps, x - h).unwrap().x_prime;
                let jac = (fwd - bwd) / (2.0 * h);
                assert!((jac * img.f2 - 1.0).abs() < 1e-8, "{kind:?} eps={eps} x={x}");
                let g = induced_metric(kind, eps, x).unwrap();
                // pulled-back flat metric: (dx/dx')^2 g = 1
                assert!((g / (jac * jac) - 1.0).abs() < 1e-8);
            }
        }
    }
}
