//! Mass and squared-frequency time profiles.
//!
//! An [`OscillatorProfile`] pairs a mass law `m(t) > 0` with a squared
//! frequency `w^2(t)` (any sign, so inverted oscillators are representable)
//! on an explicit finite time domain. Evaluation outside the domain is an
//! error; nothing is extrapolated.

use std::fmt;

use crate::error::{Error, Result};
use crate::spline::CubicSpline;

/// Closed time interval `[start, end]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeDomain {
    pub start: f64,
    pub end: f64,
}

impl TimeDomain {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        if !(start.is_finite() && end.is_finite() && start < end) {
            return Err(Error::usage(format!(
                "time domain [{start}, {end}] must be finite and non-empty"
            )));
        }
        Ok(Self { start, end })
    }

    fn slack(&self) -> f64 {
        1e-12 * (self.end - self.start).max(self.end.abs()).max(1.0)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start - self.slack() && t <= self.end + self.slack()
    }

    pub fn check(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                start: self.start,
                end: self.end,
            })
        }
    }

    /// `n + 1` evenly spaced times covering the domain, endpoints included.
    pub fn linspace(&self, n: usize) -> impl Iterator<Item = f64> + '_ {
        let n = n.max(1);
        (0..=n).map(move |i| {
            if i == n {
                self.end
            } else {
                self.start + (self.end - self.start) * i as f64 / n as f64
            }
        })
    }
}

/// A scalar function of time with three analytic derivatives.
#[derive(Debug, Clone, PartialEq)]
pub enum TimeLaw {
    Constant(f64),
    /// `scale * exp(rate * t)`
    Exponential {
        scale: f64,
        rate: f64,
    },
    /// `scale * (mu e^{alpha t} + nu e^{-alpha t})^2`
    SolvableFamily {
        scale: f64,
        mu: f64,
        nu: f64,
        alpha: f64,
    },
    /// Coefficients in ascending powers of `t`.
    Polynomial(Vec<f64>),
    /// `offset + amplitude * sin(angular_frequency * t + phase)`
    Sinusoidal {
        offset: f64,
        amplitude: f64,
        angular_frequency: f64,
        phase: f64,
    },
    Tabulated(CubicSpline),
}

impl TimeLaw {
    /// Value and first three time derivatives.
    pub fn derivatives(&self, t: f64) -> [f64; 4] {
        match self {
            TimeLaw::Constant(c) => [*c, 0.0, 0.0, 0.0],
            TimeLaw::Exponential { scale, rate } => {
                let v = scale * (rate * t).exp();
                [v, rate * v, rate * rate * v, rate * rate * rate * v]
            }
            TimeLaw::SolvableFamily { scale, mu, nu, alpha } => {
                let (ep, em) = ((alpha * t).exp(), (-alpha * t).exp());
                let g = mu * ep + nu * em;
                let g1 = alpha * (mu * ep - nu * em);
                let g2 = alpha * alpha * g;
                let g3 = alpha * alpha * g1;
                [
                    scale * g * g,
                    2.0 * scale * g * g1,
                    2.0 * scale * (g1 * g1 + g * g2),
                    2.0 * scale * (3.0 * g1 * g2 + g * g3),
                ]
            }
            TimeLaw::Polynomial(c) => {
                let mut out = [0.0; 4];
                for (order, slot) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (k, &ck) in c.iter().enumerate().skip(order).rev() {
                        let falling: f64 = (0..order).map(|j| (k - j) as f64).product();
                        acc = acc * t + ck * falling;
                    }
                    *slot = acc;
                }
                out
            }
            TimeLaw::Sinusoidal {
                offset,
                amplitude,
                angular_frequency: w,
                phase,
            } => {
                let arg = w * t + phase;
                let (s, c) = arg.sin_cos();
                [
                    offset + amplitude * s,
                    amplitude * w * c,
                    -amplitude * w * w * s,
                    -amplitude * w * w * w * c,
                ]
            }
            TimeLaw::Tabulated(spline) => spline.eval(t),
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.derivatives(t)[0]
    }
}

/// How the squared frequency is obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyLaw {
    Squared(TimeLaw),
    /// `w^2 = Omega0^2 + m''/2m - (m'/2m)^2`, the exactly solvable choice.
    Solvable {
        omega0_sq: f64,
    },
}

/// Reported family of a profile, named after its mass law.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileKind {
    Constant,
    CaldirolaKanai,
    SolvableMassFamily,
    Polynomial,
    SinusoidalModulated,
    Tabulated,
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProfileKind::Constant => "constant",
            ProfileKind::CaldirolaKanai => "caldirola-kanai",
            ProfileKind::SolvableMassFamily => "solvable-mass-family",
            ProfileKind::Polynomial => "polynomial",
            ProfileKind::SinusoidalModulated => "sinusoidal-modulated",
            ProfileKind::Tabulated => "tabulated",
        };
        f.write_str(s)
    }
}

/// Mass, its first two rates and the squared frequency with its rate, all at
/// one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileSample {
    pub t: f64,
    pub mass: f64,
    pub mass_rate: f64,
    pub mass_accel: f64,
    pub freq_sq: f64,
    pub freq_sq_rate: f64,
}

impl ProfileSample {
    /// `m''/2m - (m'/2m)^2`, the mass-induced shift of the squared frequency.
    pub fn mass_shift(&self) -> f64 {
        let r = self.mass_rate / (2.0 * self.mass);
        self.mass_accel / (2.0 * self.mass) - r * r
    }
}

/// Time-dependent oscillator `H = p^2/(2 m(t)) + m(t) w^2(t) x^2 / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorProfile {
    mass: TimeLaw,
    freq: FrequencyLaw,
    domain: TimeDomain,
    // Law time = local time + origin; nonzero only for re-based profiles.
    origin: f64,
}

const POSITIVITY_SCAN: usize = 4000;

impl OscillatorProfile {
    /// Builds a profile, checking mass positivity over the domain.
    pub fn new(mass: TimeLaw, freq: FrequencyLaw, domain: TimeDomain) -> Result<Self> {
        let profile = Self {
            mass,
            freq,
            domain,
            origin: 0.0,
        };
        profile.check_mass_positive()?;
        if let TimeLaw::Tabulated(s) = &profile.mass {
            check_covers(s, &domain, "mass")?;
        }
        if let FrequencyLaw::Squared(TimeLaw::Tabulated(s)) = &profile.freq {
            check_covers(s, &domain, "squared frequency")?;
        }
        if let FrequencyLaw::Solvable { omega0_sq } = profile.freq {
            profile.check_solvable_radicand(omega0_sq)?;
        }
        Ok(profile)
    }

    pub fn constant(mass: f64, omega: f64, domain: TimeDomain) -> Result<Self> {
        Self::new(
            TimeLaw::Constant(mass),
            FrequencyLaw::Squared(TimeLaw::Constant(omega * omega)),
            domain,
        )
    }

    /// Caldirola-Kanai mass `m0 e^{gamma t}`; the frequency is zero until one
    /// is attached.
    pub fn caldirola_kanai(m0: f64, gamma: f64, domain: TimeDomain) -> Result<Self> {
        if !(m0 > 0.0) {
            return Err(Error::Positivity {
                what: "mass",
                t: domain.start,
                value: m0,
            });
        }
        Self::new(
            TimeLaw::Exponential { scale: m0, rate: gamma },
            FrequencyLaw::Squared(TimeLaw::Constant(0.0)),
            domain,
        )
    }

    /// Mass `m0 (mu e^{alpha t} + nu e^{-alpha t})^2`, the fixed-frequency
    /// solutions of the exact-solvability condition.
    pub fn solvable_mass_family(m0: f64, mu: f64, nu: f64, alpha: f64, domain: TimeDomain) -> Result<Self> {
        if !(m0 > 0.0) {
            return Err(Error::Positivity {
                what: "mass",
                t: domain.start,
                value: m0,
            });
        }
        // Zero of mu e^{at} + nu e^{-at}.
        let zero = if alpha == 0.0 {
            (mu + nu == 0.0).then_some(domain.start)
        } else if mu != 0.0 && -nu / mu > 0.0 {
            Some((-nu / mu).ln() / (2.0 * alpha))
        } else if mu == 0.0 && nu == 0.0 {
            Some(domain.start)
        } else {
            None
        };
        if let Some(t) = zero.filter(|t| domain.contains(*t)) {
            return Err(Error::Positivity {
                what: "mass",
                t,
                value: 0.0,
            });
        }
        Self::new(
            TimeLaw::SolvableFamily {
                scale: m0,
                mu,
                nu,
                alpha,
            },
            FrequencyLaw::Squared(TimeLaw::Constant(0.0)),
            domain,
        )
    }

    pub fn polynomial(mass: Vec<f64>, freq_sq: Vec<f64>, domain: TimeDomain) -> Result<Self> {
        Self::new(
            TimeLaw::Polynomial(mass),
            FrequencyLaw::Squared(TimeLaw::Polynomial(freq_sq)),
            domain,
        )
    }

    /// Tabulated profile from `(t, m)` and `(t, w^2)` samples; the domain is
    /// the overlap of the two sample ranges.
    pub fn tabulated(mass: &[(f64, f64)], freq_sq: &[(f64, f64)]) -> Result<Self> {
        let ms = spline_from(mass)?;
        let ws = spline_from(freq_sq)?;
        let domain = TimeDomain::new(ms.start().max(ws.start()), ms.end().min(ws.end()))?;
        Self::new(
            TimeLaw::Tabulated(ms),
            FrequencyLaw::Squared(TimeLaw::Tabulated(ws)),
            domain,
        )
    }

    pub fn with_frequency_sq(mut self, law: TimeLaw) -> Result<Self> {
        if let TimeLaw::Tabulated(s) = &law {
            check_covers(s, &self.domain, "squared frequency")?;
        }
        self.freq = FrequencyLaw::Squared(law);
        Ok(self)
    }

    pub fn with_constant_frequency(self, omega: f64) -> Self {
        Self {
            freq: FrequencyLaw::Squared(TimeLaw::Constant(omega * omega)),
            ..self
        }
    }

    /// Attaches `w(t) = sqrt(Omega0^2 + m''/2m - (m'/2m)^2)`, making the
    /// oscillator canonically equivalent to a fixed oscillator of frequency
    /// `Omega0`.
    pub fn solvable_frequency(self, omega0: f64) -> Result<Self> {
        let omega0_sq = omega0 * omega0;
        self.check_solvable_radicand(omega0_sq)?;
        Ok(Self {
            freq: FrequencyLaw::Solvable { omega0_sq },
            ..self
        })
    }

    pub fn domain(&self) -> TimeDomain {
        self.domain
    }

    pub fn mass_law(&self) -> &TimeLaw {
        &self.mass
    }

    pub fn frequency_law(&self) -> &FrequencyLaw {
        &self.freq
    }

    pub fn kind(&self) -> ProfileKind {
        match &self.mass {
            TimeLaw::Constant(_) => ProfileKind::Constant,
            TimeLaw::Exponential { .. } => ProfileKind::CaldirolaKanai,
            TimeLaw::SolvableFamily { .. } => ProfileKind::SolvableMassFamily,
            TimeLaw::Polynomial(_) => ProfileKind::Polynomial,
            TimeLaw::Sinusoidal { .. } => ProfileKind::SinusoidalModulated,
            TimeLaw::Tabulated(_) => ProfileKind::Tabulated,
        }
    }

    /// The same oscillator with its time origin moved to `t0`: local time
    /// `s` corresponds to original time `t0 + s`.
    pub fn rebased(&self, t0: f64) -> Result<Self> {
        self.domain.check(t0)?;
        let domain = TimeDomain::new(0.0, self.domain.end - t0)?;
        Ok(Self {
            mass: self.mass.clone(),
            freq: self.freq.clone(),
            domain,
            origin: self.origin + t0,
        })
    }

    pub fn eval(&self, t: f64) -> Result<ProfileSample> {
        self.domain.check(t)?;
        let s = self.eval_unchecked(t);
        if !(s.mass > 0.0) {
            return Err(Error::Positivity {
                what: "mass",
                t,
                value: s.mass,
            });
        }
        Ok(s)
    }

    /// Mass at `t`; convenience over [`eval`](Self::eval).
    pub fn mass(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.mass)
    }

    pub(crate) fn eval_unchecked(&self, t: f64) -> ProfileSample {
        let tl = t + self.origin;
        let [m, m1, m2, m3] = self.mass.derivatives(tl);
        let (w2, w2_rate) = match &self.freq {
            FrequencyLaw::Squared(law) => {
                let d = law.derivatives(tl);
                (d[0], d[1])
            }
            FrequencyLaw::Solvable { omega0_sq } => {
                let r = m1 / (2.0 * m);
                let a = m2 / (2.0 * m);
                let w2 = omega0_sq + a - r * r;
                let da = m3 / (2.0 * m) - m2 * m1 / (2.0 * m * m);
                let dr = a - m1 * m1 / (2.0 * m * m);
                (w2, da - 2.0 * r * dr)
            }
        };
        ProfileSample {
            t,
            mass: m,
            mass_rate: m1,
            mass_accel: m2,
            freq_sq: w2,
            freq_sq_rate: w2_rate,
        }
    }

    fn scan_times(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self.domain.linspace(POSITIVITY_SCAN).collect();
        if let TimeLaw::Tabulated(s) = &self.mass {
            ts.extend(
                s.knots()
                    .iter()
                    .map(|k| k - self.origin)
                    .filter(|t| self.domain.contains(*t)),
            );
            ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        }
        ts
    }

    fn check_mass_positive(&self) -> Result<()> {
        for t in self.scan_times() {
            let m = self.mass.value(t + self.origin);
            if !(m > 0.0) {
                return Err(Error::Positivity {
                    what: "mass",
                    t,
                    value: m,
                });
            }
        }
        Ok(())
    }

    fn check_solvable_radicand(&self, omega0_sq: f64) -> Result<()> {
        let mut bad: Option<(f64, f64)> = None;
        for t in self.scan_times() {
            let mut s = self.eval_unchecked(t);
            s.freq_sq = omega0_sq + s.mass_shift();
            if s.freq_sq < 0.0 {
                bad = Some(match bad {
                    None => (t, t),
                    Some((a, _)) => (a, t),
                });
            } else if bad.is_some() {
                break;
            }
        }
        match bad {
            Some((start, end)) => Err(Error::ImaginaryFrequency { start, end }),
            None => Ok(()),
        }
    }
}

pub(crate) fn spline_from(samples: &[(f64, f64)]) -> Result<CubicSpline> {
    let (t, v) = samples.iter().copied().unzip();
    CubicSpline::new(t, v)
}

fn check_covers(s: &CubicSpline, domain: &TimeDomain, what: &str) -> Result<()> {
    let slack = 1e-12 * domain.end.abs().max(1.0);
    if s.start() > domain.start + slack || s.end() < domain.end - slack {
        return Err(Error::Config(format!(
            "{what} samples cover [{}, {}] but the domain is [{}, {}]",
            s.start(),
            s.end(),
            domain.start,
            domain.end
        )));
    }
    Ok(())
}

/// Parses a two-column `time,value` CSV with a header row.
pub fn read_samples_csv(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Config(format!("csv header: {e}")))?;
    if headers.len() != 2 {
        return Err(Error::Config(format!(
            "expected 2 csv columns (time, value), found {}",
            headers.len()
        )));
    }
    let mut out = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Config(format!("csv row {}: {e}", line + 1)))?;
        if record.len() != 2 {
            return Err(Error::Config(format!(
                "csv row {} has {} fields",
                line + 1,
                record.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s
                .parse()
                .map_err(|_| Error::Config(format!("csv row {}: bad number {s:?}", line + 1)))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Config(format!("csv row {}: non-finite value", line + 1)))
            }
        };
        out.push((parse(&record[0])?, parse(&record[1])?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(a: f64, b: f64) -> TimeDomain {
        TimeDomain::new(a, b).unwrap()
    }

    #[test]
    fn constant_profile_bundle() {
        let p = OscillatorProfile::constant(1.0, 2.0, dom(0.0, 1.0)).unwrap();
        let s = p.eval(0.7).unwrap();
        assert_eq!(
            (s.mass, s.mass_rate, s.mass_accel, s.freq_sq, s.freq_sq_rate),
            (1.0, 0.0, 0.0, 4.0, 0.0)
        );
        assert_eq!(p.kind(), ProfileKind::Constant);
    }

    #[test]
    fn caldirola_kanai_values() {
        let p = OscillatorProfile::caldirola_kanai(1.0, 0.5, dom(0.0, 3.0)).unwrap();
        let s = p.eval(2.0).unwrap();
        let e = 1.0f64.exp();
        assert!((s.mass - std::f64::consts::E).abs() < 1e-9);
        assert!((s.mass_rate - 0.5 * e).abs() < 1e-14);
        let p = OscillatorProfile::caldirola_kanai(2.0, 1.0, dom(0.0, 3.0)).unwrap();
        assert!((p.mass(1.0).unwrap() - 5.43656).abs() < 1e-5);
        let p = OscillatorProfile::caldirola_kanai(1.0, 0.0, dom(0.0, 3.0)).unwrap();
        assert_eq!(p.mass(2.5).unwrap(), 1.0);
        assert!(OscillatorProfile::caldirola_kanai(0.0, 1.0, dom(0.0, 1.0)).is_err());
    }

    #[test]
    fn caldirola_kanai_is_in_solvable_family() {
        let a = 0.35;
        let ck = OscillatorProfile::caldirola_kanai(1.0, 2.0 * a, dom(0.0, 4.0)).unwrap();
        let fam = OscillatorProfile::solvable_mass_family(1.0, 1.0, 0.0, a, dom(0.0, 4.0)).unwrap();
        for t in dom(0.0, 4.0).linspace(40) {
            let (x, y) = (ck.eval(t).unwrap(), fam.eval(t).unwrap());
            assert!((x.mass - y.mass).abs() <= 1e-13 * x.mass);
            assert!((x.mass_rate - y.mass_rate).abs() <= 1e-13 * x.mass);
            assert!((x.mass_accel - y.mass_accel).abs() <= 1e-13 * x.mass);
        }
    }

    #[test]
    fn solvable_family_values_and_zero() {
        let p = OscillatorProfile::solvable_mass_family(1.0, 1.0, 0.0, 0.5, dom(0.0, 2.0)).unwrap();
        assert!((p.mass(1.0).unwrap() - 1.0f64.exp()).abs() < 1e-14);
        let p = OscillatorProfile::solvable_mass_family(1.0, 0.5, 0.5, 1.0, dom(0.0, 2.0)).unwrap();
        assert_eq!(p.mass(0.0).unwrap(), 1.0);
        match OscillatorProfile::solvable_mass_family(1.0, 1.0, -1.0, 1.0, dom(0.0, 2.0)) {
            Err(Error::Positivity { t, .. }) => assert_eq!(t, 0.0),
            other => panic!("expected positivity error, got {other:?}"),
        }
    }

    #[test]
    fn solvable_frequency_examples() {
        let p = OscillatorProfile::constant(2.0, 0.0, dom(0.0, 1.0))
            .unwrap()
            .solvable_frequency(1.3)
            .unwrap();
        assert!((p.eval(0.4).unwrap().freq_sq - 1.69).abs() < 1e-15);

        let g = 0.8;
        let p = OscillatorProfile::caldirola_kanai(1.0, g, dom(0.0, 5.0))
            .unwrap()
            .solvable_frequency(1.1)
            .unwrap();
        for t in dom(0.0, 5.0).linspace(50) {
            let s = p.eval(t).unwrap();
            assert!((s.freq_sq - (1.21 + g * g / 4.0)).abs() < 1e-12);
            assert!(s.freq_sq_rate.abs() < 1e-12);
        }

        let alpha = 0.6;
        let p = OscillatorProfile::solvable_mass_family(1.0, 1.0, 1.0, alpha, dom(0.0, 3.0))
            .unwrap()
            .solvable_frequency(alpha * 1.5)
            .unwrap();
        let w0 = p.eval(0.0).unwrap().freq_sq;
        for t in dom(0.0, 3.0).linspace(100) {
            assert!((p.eval(t).unwrap().freq_sq - w0).abs() < 1e-10);
        }
    }

    #[test]
    fn imaginary_frequency_reports_interval() {
        // m = (1 - 0.9 t)^2 ... use a sinusoidal mass with a strong negative shift.
        let law = TimeLaw::Sinusoidal {
            offset: 1.0,
            amplitude: 0.9,
            angular_frequency: 3.0,
            phase: 0.0,
        };
        let p = OscillatorProfile::new(law, FrequencyLaw::Squared(TimeLaw::Constant(1.0)), dom(0.0, 3.0)).unwrap();
        match p.solvable_frequency(0.1) {
            Err(Error::ImaginaryFrequency { start, end }) => assert!(start <= end),
            other => panic!("expected imaginary frequency, got {other:?}"),
        }
    }

    #[test]
    fn out_of_domain_is_an_error() {
        let p = OscillatorProfile::constant(1.0, 1.0, dom(0.0, 1.0)).unwrap();
        assert!(matches!(p.eval(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(p.eval(-0.1), Err(Error::OutOfDomain { .. })));
        assert!(p.eval(1.0).is_ok());
    }

    #[test]
    fn nonpositive_polynomial_mass_rejected() {
        let err = OscillatorProfile::polynomial(vec![1.0, -1.0], vec![1.0], dom(0.0, 2.0));
        assert!(matches!(err, Err(Error::Positivity { .. })));
    }

    #[test]
    fn polynomial_derivatives() {
        let law = TimeLaw::Polynomial(vec![1.0, 2.0, -3.0, 0.5, 0.25]);
        let t: f64 = 0.7;
        let d = law.derivatives(t);
        let v = 1.0 + 2.0 * t - 3.0 * t * t + 0.5 * t.powi(3) + 0.25 * t.powi(4);
        let d1 = 2.0 - 6.0 * t + 1.5 * t * t + t.powi(3);
        let d2 = -6.0 + 3.0 * t + 3.0 * t * t;
        let d3 = 3.0 + 6.0 * t;
        assert!((d[0] - v).abs() < 1e-14);
        assert!((d[1] - d1).abs() < 1e-14);
        assert!((d[2] - d2).abs() < 1e-14);
        assert!((d[3] - d3).abs() < 1e-14);
    }

    #[test]
    fn tabulated_parabola() {
        let ms: Vec<(f64, f64)> = (0..=100)
            .map(|i| {
                let t = i as f64 * 0.01;
                (t, 1.0 + t * t)
            })
            .collect();
        let ws: Vec<(f64, f64)> = ms.iter().map(|&(t, _)| (t, 1.0)).collect();
        let p = OscillatorProfile::tabulated(&ms, &ws).unwrap();
        let s = p.eval(0.5).unwrap();
        assert!((s.mass - 1.25).abs() < 1e-6);
        assert!((s.mass_accel - 2.0).abs() < 1e-6);
        assert_eq!(p.kind(), ProfileKind::Tabulated);
        assert!(p.eval(1.01).is_err());
    }

    #[test]
    fn csv_parsing() {
        let text = "time,value\n0.0, 1.5\n0.5,2\n1.0,2.5e0\n";
        assert_eq!(
            read_samples_csv(text).unwrap(),
            vec![(0.0, 1.5), (0.5, 2.0), (1.0, 2.5)]
        );
        assert!(read_samples_csv("t,v,w\n1,2,3\n").is_err());
        assert!(read_samples_csv("t,v\n1,abc\n").is_err());
        assert!(read_samples_csv("t,v\n1,inf\n").is_err());
        assert!(read_samples_csv("t,v\n1\n").is_err());
    }

    #[test]
    fn rebased_profile_shifts_time() {
        let p = OscillatorProfile::caldirola_kanai(1.0, 0.5, dom(0.0, 4.0)).unwrap();
        let q = p.rebased(1.5).unwrap();
        assert_eq!(q.domain().end, 2.5);
        assert!((q.mass(0.5).unwrap() - p.mass(2.0).unwrap()).abs() < 1e-15);
    }
}
