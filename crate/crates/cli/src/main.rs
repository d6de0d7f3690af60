//! `cqpolar` command-line workbench.

mod commands;
mod suites;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cqpolar::Error;

#[derive(Parser, Debug)]
#[command(
    name = "cqpolar",
    version,
    about = "Polar codes for classical-quantum channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Holevo quantities, fidelities and the environment check for a channel.
    ChannelInfo(ChannelInfoArgs),
    /// √F trajectory of every synthesized channel at level n.
    Polarize(PolarizeArgs),
    /// A/B/X/Y partition with rates and security/reliability bounds.
    Partition(PartitionArgs),
    /// Monte Carlo decoding or the coherent protocol.
    Simulate(SimulateArgs),
    /// Quantum capacity over symmetric coherent information on a grid.
    Capacity(CapacityArgs),
    /// Property suites; exits with status 4 on failure.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Channel spec: a JSON file path or inline JSON.
    #[arg(long)]
    pub spec: Option<String>,
    /// Polarization level; the blocklength is 2^n.
    #[arg(long)]
    pub n: Option<usize>,
    /// Blocklength N (must be a power of two); alternative to --n.
    #[arg(long, conflicts_with = "n")]
    pub blocklength: Option<usize>,
    #[arg(long, default_value_t = 0.2)]
    pub beta: f64,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Args, Debug)]
pub struct ChannelInfoArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug)]
pub struct PolarizeArgs {
    #[command(flatten)]
    pub common: Common,
    /// exact_classical or fidelity_bounds; defaults to exact when the
    /// channel commutes.
    #[arg(long)]
    pub mode: Option<String>,
}

#[derive(Args, Debug)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub common: Common,
    /// Eve's channel as a separate spec (her output is its receiver side).
    /// Derived from the complement of --spec when absent.
    #[arg(long)]
    pub eve_spec: Option<String>,
    /// Also compute the exact leakage (N ≤ 8).
    #[arg(long)]
    pub leakage: bool,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = SimMode::ClassicalSc)]
    pub mode: SimMode,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum SimMode {
    ClassicalSc,
    QuantumSc,
    Coherent,
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Parameter grid: `start:stop:step` or a comma-separated list.
    #[arg(long, default_value = "0.05:0.45:0.05")]
    pub grid: String,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub suite: Suite,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Suite {
    AppendixA,
    AppendixB,
    Lemma1,
    Conservation,
}

/// Failure of a command, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Usage(String),
    Io(std::io::Error),
    SuiteFailed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::Resource(_)) => 3,
            Failure::Core(_) | Failure::Usage(_) => 2,
            Failure::SuiteFailed(_) => 4,
            Failure::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Core(e) => e.to_string(),
            Failure::Usage(m) => m.clone(),
            Failure::Io(e) => format!("i/o error: {e}"),
            Failure::SuiteFailed(m) => format!("suite failed: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::ChannelInfo(a) => commands::channel_info(a),
        Command::Polarize(a) => commands::polarize(a),
        Command::Partition(a) => commands::partition(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Capacity(a) => commands::capacity(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
