//! Command surface of `orthoset-lab`: each verb loads an instance, runs the
//! requested checks and produces a JSON report with an exit status.

pub mod checks;
pub mod commands;
pub mod instance;
pub mod suite;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use orthoset_core::{LatticeError, OrthosetError, PermError};
use orthoset_qspace::QspaceError;
use thiserror::Error;

pub use suite::{run_suite, Budgets, SuiteConfig};

pub const DEFAULT_CAP: usize = 65536;
pub const DEFAULT_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<OrthosetError> for CliError {
    fn from(e: OrthosetError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::CapExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PermError> for CliError {
    fn from(e: PermError) -> Self {
        match e {
            PermError::GroupTooLarge { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<QspaceError> for CliError {
    fn from(e: QspaceError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

/// Text for stdout plus whether the requested properties held.
#[derive(Debug)]
pub struct Outcome {
    pub status: Status,
    pub output: String,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiagramFormat {
    Dot,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "orthoset-lab", version, about = "Explore finite orthosets, their lattices and automorphism groups, and quadratic spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate orthoset and lattice predicates.
    Check {
        instance: String,
        /// Comma-separated predicates (default: point-closed,boolean,rank).
        #[arg(long, alias = "check", value_delimiter = ',')]
        props: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the lattice of orthoclosed sets and report its properties.
    Lattice {
        instance: String,
        /// Format of the Hasse diagram.
        #[arg(long, value_enum, default_value = "json")]
        out: DiagramFormat,
        /// Properties that must hold for a zero exit status.
        #[arg(long = "check", value_delimiter = ',')]
        checks: Vec<String>,
        /// Write the diagram to this file instead of embedding it in the report.
        #[arg(long)]
        write: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Automorphism group order, generators and orbits.
    Aut {
        instance: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Homogeneous transitivity (HT1), (HT2) with per-pair tables.
    Ht {
        instance: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Divisible transitivity (DT0)-(DT2).
    Dt {
        instance: String,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Quasiprimitivity of the group generated by rotations.
    Qp {
        instance: String,
        /// JSON array of permutations (image arrays); defaults to the nontrivial
        /// elements of the divisible parts of all G_ef.
        #[arg(long)]
        rotations: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rotations, roots and the infinitesimal probe in a quadratic space.
    Qspace {
        space: String,
        #[command(subcommand)]
        action: QspaceAction,
    },
    /// Run a suite of checks over a list of instances.
    Suite {
        /// Suite configuration; the built-in default suite when omitted.
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Also write the report to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum QspaceAction {
    /// The simple rotation taking <from> to <to>.
    Rotate {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// A root of order `pow` (a power of two) of that rotation.
    Root {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 2)]
        pow: u32,
    },
    /// Orbit of <e1> under products of conjugates of a small rotation by `a`.
    Probe {
        #[arg(long, default_value = "t")]
        a: String,
        #[arg(long, default_value_t = 3)]
        word_length: usize,
    },
}

pub fn execute(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Check { instance, props, cap, seed } => commands::check(&instance, &props, cap, seed),
        Command::Lattice { instance, out, checks, write, cap, seed } => {
            commands::lattice(&instance, out, &checks, write.as_deref(), cap, seed)
        }
        Command::Aut { instance, seed } => commands::aut(&instance, seed),
        Command::Ht { instance, budget, seed } => commands::ht(&instance, budget, seed),
        Command::Dt { instance, budget, seed } => commands::dt(&instance, budget, seed),
        Command::Qp { instance, rotations, budget, seed } => commands::qp(&instance, rotations.as_deref(), budget, seed),
        Command::Qspace { space, action } => commands::qspace(&space, action),
        Command::Suite { config, seed, out } => commands::suite(config.as_deref(), seed, out.as_deref()),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Result<Outcome, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| CliError::Input(e.to_string()))?;
    execute(cli)
}
