//! `actsim` command-line front end.
//!
//! Exit status: 0 on success, 1 on output I/O failure, 2 when input cannot be
//! read, parsed or does not fit the graph, 3 when an engine fails, 4 when a
//! contract or validation check fails.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use actsim::Error;

#[derive(Debug, Parser)]
#[command(
    name = "actsim",
    version,
    about = "Globally driven qubit arrays with quantum actuators"
)]
pub struct Cli {
    /// Seed for every random test state.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Record wall-clock timings. Off by default so output is reproducible byte for byte.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an architecture and write it as JSON.
    Build(BuildArgs),
    /// Check an architecture file; exit 4 on any violation.
    Validate { arch: PathBuf },
    /// Count drive lines, qubits, coupling classes and actuators.
    Resources { arch: PathBuf },
    /// Compile (or load) a gate schedule, replay it and check its contract.
    Run(RunArgs),
    /// Compare exact and blockade-limit operators over blockade ratios.
    Sweep(SweepArgs),
    /// Breadth-first search for a pulse string realising a gate contract.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Kind {
    Ladder,
    Conveyor,
    Star,
    /// Two conveyor belts joined by a bridge actuator at their first logical sites.
    Modular,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub kind: Kind,
    /// Logical size N (star: number of neighbours).
    pub n: usize,
    /// Geometry variant (ignored for star).
    pub variant: Option<String>,
    /// Attach an actuator layer to these qubits.
    #[arg(long, value_delimiter = ',')]
    pub layer: Vec<usize>,
    /// Output path; stdout when absent.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RequestArgs {
    /// Gate name: cz, ccz, cnot, swap_step, icc_shift, modular_swap, freeze_region, unfreeze_region.
    #[arg(long)]
    pub gate: String,
    #[arg(long, value_delimiter = ',')]
    pub qubits: Vec<usize>,
    /// Region mask name for freeze and unfreeze.
    #[arg(long)]
    pub region: Option<String>,
    /// Starting column index for icc_shift.
    #[arg(long, default_value_t = 0)]
    pub position: usize,
    /// Reverse parity (swap_step) or direction (icc_shift).
    #[arg(long)]
    pub reverse: bool,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Effective,
    Exact,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BackendArg {
    Auto,
    Dense,
    Factorized,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    pub arch: PathBuf,
    #[command(flatten)]
    pub request: RequestArgs,
    /// Replay this IR file instead of compiling the request.
    #[arg(long)]
    pub ir: Option<PathBuf>,
    /// Write the replayed IR here.
    #[arg(long)]
    pub emit_ir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = EngineKind::Effective)]
    pub engine: EngineKind,
    /// Blockade ratio for the exact engine.
    #[arg(long, default_value_t = 80.0)]
    pub eta: f64,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    /// Random contract inputs added to the basis inputs.
    #[arg(long, default_value_t = 4)]
    pub samples: usize,
    /// Pass mark for the worst contract fidelity (default 1 - 1e-9 effective, 0.999 exact).
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Also write a one-row CSV summary.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub arch: PathBuf,
    /// cz, ccz, freeze or pi_pulse.
    #[arg(long)]
    pub op: String,
    /// Comma-separated blockade ratios; an empty string gives a header-only CSV.
    #[arg(long, default_value = "5,20,80")]
    pub eta: String,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    pub backend: BackendArg,
    /// CSV destination. Without it the CSV goes to stdout instead of the JSON report.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub arch: PathBuf,
    #[command(flatten)]
    pub request: RequestArgs,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[arg(long, default_value_t = actsim::sequencer::DEFAULT_NODE_CAP)]
    pub node_cap: usize,
    /// Alphabet as an IR file of PULSE lines; the default alphabet otherwise.
    #[arg(long)]
    pub alphabet: Option<PathBuf>,
    /// Write the found IR here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure classes and their exit codes.
#[derive(Debug)]
pub enum CliError {
    Output(String),
    Input(String),
    Engine(String),
    Contract(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Output(_) => 1,
            CliError::Input(_) => 2,
            CliError::Engine(_) => 3,
            CliError::Contract(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Output(m)
            | CliError::Input(m)
            | CliError::Engine(m)
            | CliError::Contract(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Json(_)
            | Error::IrParse { .. }
            | Error::InvalidParameter(_)
            | Error::UnsupportedOp(_)
            | Error::InvalidRequest(_)
            | Error::GeometryMismatch(_)
            | Error::InvalidRegion(..)
            | Error::InvalidGraph(_)
            | Error::UnknownSpecies(_)
            | Error::NotAnActuator(_)
            | Error::MissingPartner(_)
            | Error::NoLibrarySequence(_) => CliError::Input(e.to_string()),
            other => CliError::Engine(other.to_string()),
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("ACTSIM_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::Input(format!(
                "ACTSIM_THREADS must be a positive integer, got `{value}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Engine(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| commands::dispatch(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("actsim: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
