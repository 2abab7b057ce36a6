use thiserror::Error;

use crate::auxode::AuxiliarySolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by the command line front end for exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Domain,
    Numerical,
    Usage,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("time {t} outside profile domain [{start}, {end}]")]
    OutOfDomain { t: f64, start: f64, end: f64 },

    #[error("{what} is not positive at t = {t} (value {value})")]
    Positivity { what: &'static str, t: f64, value: f64 },

    #[error("squared frequency is negative on [{start}, {end}] (imaginary frequency)")]
    ImaginaryFrequency { start: f64, end: f64 },

    #[error("auxiliary solution reaches zero at t = {t}")]
    PositivityHorizon { t: f64, partial: Box<AuxiliarySolution> },

    #[error("integrator step size collapsed at t = {t} (h = {h})")]
    Stiffness { t: f64, h: f64 },

    #[error("point x = {x} is outside the domain of the map ({reason})")]
    MapDomain { x: f64, reason: String },

    #[error("wavefunction leaves the grid box at t = {t} (boundary density {density:e})")]
    BoxOverflow { t: f64, density: f64 },

    #[error("grids do not match")]
    GridMismatch,

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Config(_) | Error::Io(_) => ErrorCategory::Config,
            Error::OutOfDomain { .. }
            | Error::Positivity { .. }
            | Error::ImaginaryFrequency { .. }
            | Error::PositivityHorizon { .. }
            | Error::MapDomain { .. } => ErrorCategory::Domain,
            Error::Stiffness { .. } | Error::BoxOverflow { .. } => ErrorCategory::Numerical,
            Error::GridMismatch | Error::Usage(_) => ErrorCategory::Usage,
        }
    }

    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
