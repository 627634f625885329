//! Argument types, command dispatch and output handling for `susyqm`.

pub mod commands;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

pub use output::{LedgerEntry, OutFile, RunManifest, RunOutcome};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] susyqm::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for bad input or violated constraints, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        use susyqm::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Constraint(_) | E::InvalidInput(_) | E::Domain { .. } | E::UnsupportedFamily { .. }) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "susyqm", version, about = "Shape-invariant potentials, partner spectra and the sextic triple well")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true)]
    pub grid_points: Option<usize>,
    #[arg(long, global = true)]
    pub domain_halfwidth: Option<f64>,
    /// Shape-invariance tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write result files and manifest.json here instead of stdout/stderr.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long = "A", allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long = "B", allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long = "D", allow_negative_numbers = true)]
    pub d: Option<f64>,
    #[arg(long = "G", allow_negative_numbers = true)]
    pub g: Option<f64>,
    /// Scale parameter of the family.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(long = "B0", allow_negative_numbers = true)]
    pub b0: Option<f64>,
    #[arg(long = "G0", allow_negative_numbers = true)]
    pub g0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recursion,
    ClosedForm,
    Oracle,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SampleKind {
    /// Superpotential W.
    W,
    VMinus,
    VPlus,
    /// Shifted triple-well potential (sextic only).
    V,
    /// n-th state: closed form for the sextic, ladder chain otherwise.
    Psi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Catalog,
    Sextic,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the potential catalog.
    Catalog,
    /// Energy levels by recursion, closed form and/or the oracle.
    Spectrum {
        #[command(flatten)]
        family: FamilyArgs,
        /// Highest level index.
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, value_enum, default_value = "recursion")]
        method: Method,
    },
    /// Sample W, a partner potential or a wavefunction on a grid.
    Sample {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value = "v-minus")]
        what: SampleKind,
        #[arg(long, default_value_t = 0)]
        n: usize,
    },
    /// Shape-invariance and/or sextic wavefunction suites.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        scope: Scope,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Data files for the reference triple-well figure.
    Figure {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Gap ratio across the triple-well band.
    ScanRho {
        #[arg(long, allow_negative_numbers = true)]
        ratio_lo: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        ratio_hi: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long = "B0", default_value_t = 1.0)]
        b0: f64,
    },
}

/// Runs one command; the manifest timestamp is filled in by the caller.
pub fn run(cli: &Cli) -> CliResult<RunOutcome> {
    commands::dispatch(cli)
}
