//! `tdho`: config-driven runs of the auxiliary solver, the closed-form
//! propagator and the oracle suite.

mod commands;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tdho::config::{Format, RunConfig};
use tdho::{Error, ErrorCategory};

#[derive(Debug, Parser)]
#[command(
    name = "tdho",
    version,
    about = "Exact propagation of time-dependent harmonic oscillators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Run configuration (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    /// Override a named tolerance, e.g. `--tolerance rtol=1e-11`.
    #[arg(long = "tolerance", global = true, value_name = "NAME=VALUE")]
    tolerances: Vec<String>,

    /// Seed for randomized checks; overrides the config value.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Tabulate the auxiliary solution (t, chi, chi').
    SolveAux,
    /// Tabulate the Heisenberg map entries (t, a, b, c, d).
    Heisenberg,
    /// Evolve a Gaussian state along the time grid.
    Evolve,
    /// Test membership in the exactly solvable class.
    Classify,
    /// Tabulate a configuration-space diffeomorphism and its induced metric.
    Metric,
    /// Run the oracle suite and report the maximum error of every check.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::SolveAux => "solve-aux",
            Command::Heisenberg => "heisenberg",
            Command::Evolve => "evolve",
            Command::Classify => "classify",
            Command::Metric => "metric",
            Command::Verify => "verify",
        }
    }

    fn default_format(self) -> Format {
        match self {
            Command::Classify | Command::Verify => Format::Json,
            _ => Format::Csv,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

const EXIT_CONFIG: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_NUMERICAL: u8 = 5;

enum Failure {
    Error(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| Error::Config("--config PATH is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    for t in &cli.tolerances {
        cfg.override_tolerance(t)?;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = Some(seed);
    }
    let output = cfg.output.clone().unwrap_or(tdho::config::OutputSpec {
        path: None,
        format: None,
    });
    let format = cli
        .format
        .map(Format::from)
        .or(output.format)
        .unwrap_or(cli.command.default_format());

    let outcome = match cli.command {
        Command::SolveAux => commands::solve_aux(&cfg)?,
        Command::Heisenberg => commands::heisenberg(&cfg)?,
        Command::Evolve => commands::evolve(&cfg)?,
        Command::Classify => commands::classify(&cfg)?,
        Command::Metric => commands::metric(&cfg)?,
        Command::Verify => verify::run(&cfg)?,
    };
    let mut doc = outcome.document;
    doc.command = cli.command.name().to_string();
    let text = doc.render(format)?;

    let destination = cli
        .out
        .clone()
        .or_else(|| output.path.as_deref().map(|p| cfg.resolve(p)));
    match destination {
        Some(p) => fs::write(&p, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if outcome.passed {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => {
            eprintln!("error: one or more checks exceeded their tolerance");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Error(e)) => {
            let (code, label) = match e.category() {
                ErrorCategory::Config | ErrorCategory::Usage => (EXIT_CONFIG, "config"),
                ErrorCategory::Domain => (EXIT_DOMAIN, "domain"),
                ErrorCategory::Numerical => (EXIT_NUMERICAL, "numerical"),
            };
            eprintln!("error[{label}]: {e}");
            ExitCode::from(code)
        }
    }
}
