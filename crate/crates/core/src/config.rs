//! Run configuration files.
//!
//! A run is described by one TOML document. Profiles are given inline as a
//! kind tag plus parameters, by pointing at a separate TOML file holding the
//! `[profile]` table, or (for tabulated laws) by a path to a two-column CSV
//! of `(t, value)` samples. Relative paths resolve against the directory of
//! the configuration file.
//!
//! ```toml
//! seed = 7
//!
//! [profile]
//! t_end = 10.0
//! mass = { kind = "caldirola-kanai", m0 = 1.0, gamma = 1.0 }
//! frequency = { kind = "constant", omega = 1.118033988749895 }
//!
//! [aux]
//! k_squared = 1
//! chi0 = 1.0
//! chidot0 = 0.0
//!
//! [grid]
//! t_max = 5.0
//! samples = 100
//!
//! [tolerances]
//! rtol = 1e-10
//! ```

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::auxode::KBranch;
use crate::canon::DiffeoKind;
use crate::error::{Error, Result};
use crate::ode::OdeOptions;
use crate::profiles::{read_samples_csv, FrequencyLaw, OscillatorProfile, TimeDomain, TimeLaw};
use crate::propagator::GaussianState;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub profile: Option<ProfileSource>,
    pub aux: Option<AuxSpec>,
    pub grid: Option<GridSpec>,
    pub state: Option<StateSpec>,
    pub metric: Option<MetricSpec>,
    pub verify: Option<VerifySpec>,
    pub output: Option<OutputSpec>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(skip)]
    base_dir: PathBuf,
}

/// Either an inline `[profile]` table or a path to a TOML file containing one.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum ProfileSource {
    File(String),
    Inline(ProfileSpec),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    /// End of the domain `[0, t_end]`. Tabulated profiles default to the
    /// sampled range.
    pub t_end: Option<f64>,
    pub mass: MassSpec,
    pub frequency: FrequencySpec,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MassSpec {
    Constant {
        value: f64,
    },
    CaldirolaKanai {
        m0: f64,
        gamma: f64,
    },
    SolvableMassFamily {
        m0: f64,
        mu: f64,
        nu: f64,
        alpha: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    SinusoidalModulated {
        offset: f64,
        amplitude: f64,
        angular_frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    Tabulated {
        path: String,
    },
}

/// Frequency law; every kind except `constant` and `solvable` describes `w^2`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FrequencySpec {
    Constant {
        omega: f64,
    },
    Polynomial {
        coefficients: Vec<f64>,
    },
    SinusoidalModulated {
        offset: f64,
        amplitude: f64,
        angular_frequency: f64,
        #[serde(default)]
        phase: f64,
    },
    Tabulated {
        path: String,
    },
    Solvable {
        omega0: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxSpec {
    pub k_squared: i64,
    pub chi0: f64,
    #[serde(default)]
    pub chidot0: f64,
}

impl AuxSpec {
    pub fn branch(&self) -> Result<KBranch> {
        KBranch::from_k_squared(self.k_squared)
            .ok_or_else(|| Error::Config(format!("k_squared must be -1, 0 or 1, got {}", self.k_squared)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub t_max: f64,
    pub samples: usize,
}

impl GridSpec {
    /// `samples + 1` evenly spaced times from 0 to `t_max`.
    pub fn times(&self) -> Vec<f64> {
        (0..=self.samples)
            .map(|i| self.t_max * i as f64 / self.samples as f64)
            .collect()
    }
}

/// Pure Gaussian initial state.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    #[serde(default)]
    pub mean_x: f64,
    #[serde(default)]
    pub mean_p: f64,
    pub var_x: f64,
    #[serde(default)]
    pub cov_xp: f64,
}

impl StateSpec {
    pub fn gaussian(&self) -> Result<GaussianState> {
        GaussianState::pure(self.mean_x, self.mean_p, self.var_x, self.cov_xp)
            .map_err(|e| Error::Config(format!("[state]: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffeoName {
    Linear,
    Quadratic,
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricSpec {
    pub kind: DiffeoName,
    pub lambda: Option<f64>,
    pub eps: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
}

impl MetricSpec {
    pub fn diffeo(&self) -> Result<DiffeoKind> {
        match (self.kind, self.lambda) {
            (DiffeoName::Linear, None) => Ok(DiffeoKind::Linear),
            (DiffeoName::Quadratic, None) => Ok(DiffeoKind::Quadratic),
            (DiffeoName::Exponential, Some(l)) => {
                DiffeoKind::exponential(l).map_err(|e| Error::Config(format!("[metric]: {e}")))
            }
            (DiffeoName::Exponential, None) => Err(Error::Config("[metric]: exponential kind needs lambda".into())),
            (_, Some(_)) => Err(Error::Config(
                "[metric]: lambda only applies to the exponential kind".into(),
            )),
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.samples)
            .map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / self.samples as f64)
            .collect()
    }
}

/// Settings of the oracle suite.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySpec {
    /// Number of random draws for the symplectic-invariant check.
    pub draws: usize,
    pub grid_points: usize,
    pub box_half_width: f64,
    pub time_step: f64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        Self {
            draws: 200,
            grid_points: 2048,
            box_half_width: 20.0,
            time_step: 5e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub path: Option<String>,
    pub format: Option<Format>,
}

/// Named numerical tolerances. Every field can be overridden by name.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
    pub classify: f64,
    pub det: f64,
    pub oracle: f64,
    pub gauge: f64,
    pub reduction: f64,
    pub fidelity: f64,
    pub moments: f64,
    pub order: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let ode = OdeOptions::default();
        Self {
            rtol: ode.rtol,
            atol: ode.atol,
            h_max: ode.h_max,
            classify: 1e-9,
            det: 1e-8,
            oracle: 1e-6,
            gauge: 1e-6,
            reduction: 1e-9,
            fidelity: 1e-6,
            moments: 1e-6,
            order: 1.9,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 11] = [
        "rtol",
        "atol",
        "h_max",
        "classify",
        "det",
        "oracle",
        "gauge",
        "reduction",
        "fidelity",
        "moments",
        "order",
    ];

    fn slot(&mut self, name: &str) -> Option<&mut f64> {
        Some(match name {
            "rtol" => &mut self.rtol,
            "atol" => &mut self.atol,
            "h_max" => &mut self.h_max,
            "classify" => &mut self.classify,
            "det" => &mut self.det,
            "oracle" => &mut self.oracle,
            "gauge" => &mut self.gauge,
            "reduction" => &mut self.reduction,
            "fidelity" => &mut self.fidelity,
            "moments" => &mut self.moments,
            "order" => &mut self.order,
            _ => return None,
        })
    }

    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::Config(format!(
                "tolerance {name} must be positive and finite, got {value}"
            )));
        }
        let slot = self.slot(name).ok_or_else(|| {
            Error::Config(format!(
                "unknown tolerance {name:?}; expected one of {}",
                Self::NAMES.join(", ")
            ))
        })?;
        *slot = value;
        Ok(())
    }

    /// `(name, value)` pairs in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        let mut copy = *self;
        Self::NAMES
            .iter()
            .map(|&n| (n, *copy.slot(n).expect("known name")))
            .collect()
    }

    pub fn ode_options(&self) -> OdeOptions {
        OdeOptions {
            rtol: self.rtol,
            atol: self.atol,
            h_max: self.h_max,
            ..OdeOptions::default()
        }
    }

    fn validate(&self) -> Result<()> {
        for (name, v) in self.entries() {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!(
                    "tolerance {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Parses a `NAME=VALUE` tolerance override.
pub fn parse_tolerance_override(text: &str) -> Result<(String, f64)> {
    let (name, value) = text
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("tolerance override {text:?} is not NAME=VALUE")))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(Error::Config(format!("tolerance override {text:?} has an empty name")));
    }
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::Config(format!("tolerance override {text:?} has a non-numeric value")))?;
    if !(value > 0.0) || !value.is_finite() {
        return Err(Error::Config(format!(
            "tolerance {name} must be positive and finite, got {value}"
        )));
    }
    Ok((name.to_string(), value))
}

fn finite(what: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{what} must be finite, got {v}")))
    }
}

impl RunConfig {
    /// Parses and validates a configuration without touching the file
    /// system; relative paths resolve against the current directory.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve(&self, path: &str) -> PathBuf {
        self.base_dir.join(path)
    }

    fn validate(&self) -> Result<()> {
        self.tolerances.validate()?;
        if let Some(ProfileSource::Inline(p)) = &self.profile {
            p.validate()?;
        }
        if let Some(aux) = &self.aux {
            aux.branch()?;
            finite("[aux] chidot0", aux.chidot0)?;
            if !(aux.chi0 > 0.0) || !aux.chi0.is_finite() {
                return Err(Error::Config(format!("[aux] chi0 must be positive, got {}", aux.chi0)));
            }
        }
        if let Some(g) = &self.grid {
            if !(g.t_max >= 0.0) || !g.t_max.is_finite() {
                return Err(Error::Config(format!(
                    "[grid] t_max must be non-negative, got {}",
                    g.t_max
                )));
            }
            if g.samples == 0 || g.samples > 10_000_000 {
                return Err(Error::Config(format!(
                    "[grid] samples must be in 1..=10000000, got {}",
                    g.samples
                )));
            }
        }
        if let Some(s) = &self.state {
            s.gaussian()?;
        }
        if let Some(m) = &self.metric {
            m.diffeo()?;
            finite("[metric] eps", m.eps)?;
            if !(m.x_max > m.x_min) || !m.x_min.is_finite() || !m.x_max.is_finite() {
                return Err(Error::Config("[metric] needs finite x_min < x_max".into()));
            }
            if m.samples == 0 || m.samples > 10_000_000 {
                return Err(Error::Config(format!(
                    "[metric] samples must be in 1..=10000000, got {}",
                    m.samples
                )));
            }
        }
        if let Some(v) = &self.verify {
            if !v.grid_points.is_power_of_two() || v.grid_points < 64 || v.grid_points > 1 << 20 {
                return Err(Error::Config(
                    "[verify] grid_points must be a power of two in 64..=2^20".into(),
                ));
            }
            if !(v.box_half_width > 0.0) || !(v.time_step > 0.0) || !v.box_half_width.is_finite() {
                return Err(Error::Config(
                    "[verify] box_half_width and time_step must be positive".into(),
                ));
            }
            if v.draws == 0 || v.draws > 1_000_000 {
                return Err(Error::Config("[verify] draws must be in 1..=1000000".into()));
            }
        }
        Ok(())
    }

    /// Applies a `NAME=VALUE` override.
    pub fn override_tolerance(&mut self, text: &str) -> Result<()> {
        let (name, value) = parse_tolerance_override(text)?;
        self.tolerances.set(&name, value)
    }

    fn section<T: Copy>(&self, value: Option<T>, name: &str) -> Result<T> {
        value.ok_or_else(|| Error::Config(format!("missing [{name}] section")))
    }

    pub fn aux_spec(&self) -> Result<AuxSpec> {
        self.section(self.aux, "aux")
    }

    pub fn grid_spec(&self) -> Result<GridSpec> {
        self.section(self.grid, "grid")
    }

    pub fn state_spec(&self) -> Result<StateSpec> {
        self.section(self.state, "state")
    }

    pub fn metric_spec(&self) -> Result<MetricSpec> {
        self.section(self.metric, "metric")
    }

    pub fn verify_spec(&self) -> VerifySpec {
        self.verify.unwrap_or_default()
    }

    /// Builds the profile, reading any referenced files.
    pub fn build_profile(&self) -> Result<OscillatorProfile> {
        let spec = match &self.profile {
            None => return Err(Error::Config("missing [profile] section".into())),
            Some(ProfileSource::Inline(spec)) => spec.clone(),
            Some(ProfileSource::File(path)) => {
                let full = self.resolve(path);
                let text = fs::read_to_string(&full)
                    .map_err(|e| Error::Config(format!("cannot read profile {}: {e}", full.display())))?;
                let spec = ProfileSpec::from_toml_str(&text)?;
                return spec.build(full.parent().unwrap_or(Path::new("")));
            }
        };
        spec.build(&self.base_dir)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileFile {
    profile: ProfileSpec,
}

impl ProfileSpec {
    /// Parses a standalone file with a single `[profile]` table.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: ProfileFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        file.profile.validate()?;
        Ok(file.profile)
    }

    fn validate(&self) -> Result<()> {
        let tabulated = matches!(self.mass, MassSpec::Tabulated { .. })
            || matches!(self.frequency, FrequencySpec::Tabulated { .. });
        match self.t_end {
            Some(t) if !(t > 0.0) || !t.is_finite() => {
                return Err(Error::Config(format!("[profile] t_end must be positive, got {t}")));
            }
            None if !tabulated => {
                return Err(Error::Config(
                    "[profile] t_end is required unless a law is tabulated".into(),
                ));
            }
            _ => {}
        }
        let values: Vec<f64> = match &self.mass {
            MassSpec::Constant { value } => vec![*value],
            MassSpec::CaldirolaKanai { m0, gamma } => vec![*m0, *gamma],
            MassSpec::SolvableMassFamily { m0, mu, nu, alpha } => vec![*m0, *mu, *nu, *alpha],
            MassSpec::Polynomial { coefficients } => coefficients.clone(),
            MassSpec::SinusoidalModulated {
                offset,
                amplitude,
                angular_frequency,
                phase,
            } => vec![*offset, *amplitude, *angular_frequency, *phase],
            MassSpec::Tabulated { .. } => vec![],
        };
        let freq: Vec<f64> = match &self.frequency {
            FrequencySpec::Constant { omega } => vec![*omega],
            FrequencySpec::Polynomial { coefficients } => coefficients.clone(),
            FrequencySpec::SinusoidalModulated {
                offset,
                amplitude,
                angular_frequency,
                phase,
            } => vec![*offset, *amplitude, *angular_frequency, *phase],
            FrequencySpec::Tabulated { .. } => vec![],
            FrequencySpec::Solvable { omega0 } => vec![*omega0],
        };
        for v in values.into_iter().chain(freq) {
            finite("[profile] parameter", v)?;
        }
        let empty_mass = matches!(&self.mass, MassSpec::Polynomial { coefficients } if coefficients.is_empty());
        let empty_freq =
            matches!(&self.frequency, FrequencySpec::Polynomial { coefficients } if coefficients.is_empty());
        if empty_mass || empty_freq {
            return Err(Error::Config(
                "[profile] polynomial needs at least one coefficient".into(),
            ));
        }
        Ok(())
    }

    fn build(&self, base: &Path) -> Result<OscillatorProfile> {
        let read = |path: &str| -> Result<Vec<(f64, f64)>> {
            let full = base.join(path);
            let text = fs::read_to_string(&full)
                .map_err(|e| Error::Config(format!("cannot read samples {}: {e}", full.display())))?;
            read_samples_csv(&text).map_err(|e| Error::Config(format!("{}: {e}", full.display())))
        };
        let tabulated_mass = match &self.mass {
            MassSpec::Tabulated { path } => Some(read(path)?),
            _ => None,
        };
        let tabulated_freq = match &self.frequency {
            FrequencySpec::Tabulated { path } => Some(read(path)?),
            _ => None,
        };
        let sample_range = |s: &[(f64, f64)]| (s.first().map_or(0.0, |p| p.0), s.last().map_or(0.0, |p| p.0));
        let t_end = match self.t_end {
            Some(t) => t,
            None => {
                let ends = tabulated_mass.iter().chain(&tabulated_freq).map(|s| sample_range(s).1);
                ends.fold(f64::INFINITY, f64::min)
            }
        };
        let domain = TimeDomain::new(0.0, t_end).map_err(|e| Error::Config(format!("[profile]: {e}")))?;

        let mass = match &self.mass {
            MassSpec::Constant { value } => TimeLaw::Constant(*value),
            MassSpec::CaldirolaKanai { m0, gamma } => {
                return self.finish(OscillatorProfile::caldirola_kanai(*m0, *gamma, domain)?, tabulated_freq);
            }
            MassSpec::SolvableMassFamily { m0, mu, nu, alpha } => {
                return self.finish(
                    OscillatorProfile::solvable_mass_family(*m0, *mu, *nu, *alpha, domain)?,
                    tabulated_freq,
                );
            }
            MassSpec::Polynomial { coefficients } => TimeLaw::Polynomial(coefficients.clone()),
            MassSpec::SinusoidalModulated {
                offset,
                amplitude,
                angular_frequency,
                phase,
            } => TimeLaw::Sinusoidal {
                offset: *offset,
                amplitude: *amplitude,
                angular_frequency: *angular_frequency,
                phase: *phase,
            },
            MassSpec::Tabulated { .. } => {
                let samples = tabulated_mass.expect("read above");
                TimeLaw::Tabulated(crate::profiles::spline_from(&samples)?)
            }
        };
        let base_profile = OscillatorProfile::new(mass, FrequencyLaw::Squared(TimeLaw::Constant(0.0)), domain)?;
        self.finish(base_profile, tabulated_freq)
    }

    fn finish(&self, profile: OscillatorProfile, tabulated_freq: Option<Vec<(f64, f64)>>) -> Result<OscillatorProfile> {
        let law = match &self.frequency {
            FrequencySpec::Constant { omega } => return Ok(profile.with_constant_frequency(*omega)),
            FrequencySpec::Solvable { omega0 } => return profile.solvable_frequency(*omega0),
            FrequencySpec::Polynomial { coefficients } => TimeLaw::Polynomial(coefficients.clone()),
            FrequencySpec::SinusoidalModulated {
                offset,
                amplitude,
                angular_frequency,
                phase,
            } => TimeLaw::Sinusoidal {
                offset: *offset,
                amplitude: *amplitude,
                angular_frequency: *angular_frequency,
                phase: *phase,
            },
            FrequencySpec::Tabulated { .. } => {
                let samples = tabulated_freq.expect("read above");
                TimeLaw::Tabulated(crate::profiles::spline_from(&samples)?)
            }
        };
        profile.with_frequency_sq(law)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::ProfileKind;

    const EXAMPLE: &str = r#"
seed = 7

[profile]
t_end = 10.0
mass = { kind = "caldirola-kanai", m0 = 1.0, gamma = 1.0 }
frequency = { kind = "constant", omega = 1.118033988749895 }

[aux]
k_squared = 1
chi0 = 1.0

[grid]
t_max = 5.0
samples = 100

[tolerances]
rtol = 1e-9
"#;

    #[test]
    fn parses_example() {
        let cfg = RunConfig::from_toml_str(EXAMPLE).unwrap();
        assert_eq!(cfg.seed, Some(7));
        assert_eq!(cfg.aux_spec().unwrap().branch().unwrap(), KBranch::Ermakov);
        assert_eq!(cfg.grid_spec().unwrap().times().len(), 101);
        assert_eq!(cfg.tolerances.rtol, 1e-9);
        assert_eq!(cfg.tolerances.atol, Tolerances::default().atol);
        let p = cfg.build_profile().unwrap();
        assert_eq!(p.kind(), ProfileKind::CaldirolaKanai);
        assert!((p.eval(2.0).unwrap().mass - 2f64.exp()).abs() < 1e-12);
        assert!(matches!(cfg.state_spec(), Err(Error::Config(_))));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        for bad in [
            EXAMPLE.replace("seed = 7", "seed = 7\nbogus = 1"),
            EXAMPLE.replace("gamma = 1.0", "gamma = 1.0, extra = 2"),
            EXAMPLE.replace("chi0 = 1.0", "chi0 = 1.0\nchi1 = 2.0"),
            EXAMPLE.replace("rtol = 1e-9", "rtoll = 1e-9"),
            EXAMPLE.replace("caldirola-kanai", "caldirola"),
        ] {
            assert!(matches!(RunConfig::from_toml_str(&bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in [
            EXAMPLE.replace("k_squared = 1", "k_squared = 2"),
            EXAMPLE.replace("chi0 = 1.0", "chi0 = -1.0"),
            EXAMPLE.replace("samples = 100", "samples = 0"),
            EXAMPLE.replace("rtol = 1e-9", "rtol = -1.0"),
            EXAMPLE.replace("t_end = 10.0", "t_end = nan"),
            EXAMPLE.replace("t_end = 10.0\n", ""),
            "".to_string() + "[profile]\nt_end = 1.0\nmass = { kind = \"polynomial\", coefficients = [] }\nfrequency = { kind = \"constant\", omega = 1.0 }\n",
            "[metric]\nkind = \"exponential\"\neps = 0.1\nx_min = 0.0\nx_max = 1.0\nsamples = 4\n".to_string(),
            "[metric]\nkind = \"linear\"\nlambda = 1.0\neps = 0.1\nx_min = 0.0\nx_max = 1.0\nsamples = 4\n".to_string(),
            "[verify]\ngrid_points = 1000\n".to_string(),
            "[state]\nvar_x = 0.0\n".to_string(),
        ] {
            assert!(matches!(RunConfig::from_toml_str(&bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn domain_errors_surface_when_building() {
        let text = "[profile]\nt_end = 2.0\nmass = { kind = \"solvable-mass-family\", m0 = 1.0, mu = 1.0, nu = -1.0, alpha = 1.0 }\nfrequency = { kind = \"constant\", omega = 1.0 }\n";
        let cfg = RunConfig::from_toml_str(text).unwrap();
        assert!(matches!(cfg.build_profile(), Err(Error::Positivity { .. })));
    }

    #[test]
    fn profile_file_and_csv_samples() {
        let dir = tempfile::tempdir().unwrap();
        let mut mass = String::from("t,m\n");
        let mut freq = String::from("t,w2\n");
        for i in 0..=300 {
            let t = 0.01 * i as f64;
            mass.push_str(&format!("{t},{}\n", 1.0 + t * t));
            freq.push_str(&format!("{t},4\n"));
        }
        fs::write(dir.path().join("mass.csv"), mass).unwrap();
        fs::write(dir.path().join("freq.csv"), freq).unwrap();
        fs::write(
            dir.path().join("profile.toml"),
            "[profile]\nmass = { kind = \"tabulated\", path = \"mass.csv\" }\nfrequency = { kind = \"tabulated\", path = \"freq.csv\" }\n",
        )
        .unwrap();
        fs::write(dir.path().join("run.toml"), "profile = \"profile.toml\"\n").unwrap();

        let cfg = RunConfig::load(&dir.path().join("run.toml")).unwrap();
        let p = cfg.build_profile().unwrap();
        assert!((p.domain().end - 3.0).abs() < 1e-12);
        let s = p.eval(0.5).unwrap();
        assert!((s.mass - 1.25).abs() < 1e-6 && (s.mass_accel - 2.0).abs() < 1e-6);
        assert!((s.freq_sq - 4.0).abs() < 1e-12);

        fs::write(dir.path().join("run.toml"), "profile = \"missing.toml\"\n").unwrap();
        let cfg = RunConfig::load(&dir.path().join("run.toml")).unwrap();
        assert!(matches!(cfg.build_profile(), Err(Error::Config(_))));
        assert!(matches!(
            RunConfig::load(&dir.path().join("nope.toml")),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn solvable_frequency_kind() {
        let text = "[profile]\nt_end = 3.0\nmass = { kind = \"caldirola-kanai\", m0 = 1.0, gamma = 1.0 }\nfrequency = { kind = \"solvable\", omega0 = 1.0 }\n";
        let p = RunConfig::from_toml_str(text).unwrap().build_profile().unwrap();
        assert!((p.eval(1.0).unwrap().freq_sq - 1.25).abs() < 1e-12);
    }

    #[test]
    fn tolerance_overrides() {
        assert_eq!(
            parse_tolerance_override("rtol=1e-8").unwrap(),
            ("rtol".to_string(), 1e-8)
        );
        assert_eq!(parse_tolerance_override(" det = 2 ").unwrap(), ("det".to_string(), 2.0));
        for bad in ["rtol", "=1", "rtol=abc", "rtol=-1", "rtol=inf", "rtol=0"] {
            assert!(matches!(parse_tolerance_override(bad), Err(Error::Config(_))), "{bad}");
        }
        let mut cfg = RunConfig::from_toml_str(EXAMPLE).unwrap();
        cfg.override_tolerance("oracle=1e-5").unwrap();
        assert_eq!(cfg.tolerances.oracle, 1e-5);
        assert!(matches!(cfg.override_tolerance("nonsense=1"), Err(Error::Config(_))));
        let names: Vec<&str> = cfg.tolerances.entries().iter().map(|e| e.0).collect();
        assert_eq!(names, Tolerances::NAMES);
        assert_eq!(cfg.tolerances.ode_options().rtol, 1e-9);
    }

    #[test]
    fn metric_points() {
        let text =
            "[metric]\nkind = \"exponential\"\nlambda = 1.0\neps = 0.5\nx_min = -1.0\nx_max = 1.0\nsamples = 4\n";
        let m = RunConfig::from_toml_str(text).unwrap().metric_spec().unwrap();
        assert_eq!(m.points(), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(m.diffeo().unwrap(), DiffeoKind::Exponential { lambda: 1.0 });
    }
}
