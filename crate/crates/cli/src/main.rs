//! `smalldev` command-line tool.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use smalldev::process::ProcessSpec;

use crate::error::CliError;

#[derive(Parser)]
#[command(
    name = "smalldev",
    version,
    about = "Small-deviation probabilities of iterated and time-changed processes"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Worker threads, 0 for all cores. Results do not depend on this.
    #[arg(long, default_value_t = 0, global = true)]
    pub threads: usize,
    /// Directory for output files (created if missing).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Format of data tables.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exponents and constants of iterated Brownian motion and iterated fBM.
    Constants(ConstantsArgs),
    /// Monte Carlo small-deviation curve, fit and check against a law.
    Estimate(EstimateArgs),
    /// Covering-number, local-time and alpha-time studies.
    Entropy(EntropyArgs),
    /// Write one sampled path (replicate 0 of the estimator's stream layout).
    Simulate(SimulateArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("which").required(true)))]
pub struct ConstantsArgs {
    /// Rows n = 1..N for iterated Brownian motion.
    #[arg(long, group = "which", value_name = "N")]
    pub iterated_bm: Option<usize>,
    /// Hurst indices, inner first, as decimals or fractions (e.g. 0.5,1/3).
    #[arg(long, group = "which", value_delimiter = ',', value_name = "H1,H2,..")]
    pub fbm: Option<Vec<String>>,
    /// TOML or JSON file with extra c(H) entries: `c_of_h = [{ hurst = 0.3, c = 1.1 }]`.
    #[arg(long, requires = "fbm", value_name = "FILE")]
    pub c_of_h: Option<PathBuf>,
}

#[derive(Args)]
pub struct EstimateArgs {
    /// Experiment file (TOML, or JSON with a .json extension).
    pub config: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Override the configured number of replicates.
    #[arg(long)]
    pub samples: Option<u64>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("study").multiple(false)))]
pub struct EntropyArgs {
    /// Study file (TOML or JSON); flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    /// Covering numbers of one sampled path range.
    #[arg(long, group = "study")]
    pub profile: bool,
    /// Tail of covering numbers of stable path ranges.
    #[arg(long, group = "study")]
    pub covering: bool,
    /// Tail of the local-time maximum.
    #[arg(long, group = "study")]
    pub lacey: bool,
    /// Alpha-time process: direct estimate against the entropy upper bound.
    #[arg(long, group = "study")]
    pub alpha_time: bool,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Use a stable subordinator as the inner process.
    #[arg(long)]
    pub subordinator: bool,
    /// Process for `--profile`, e.g. `bm`, `fbm:0.3`, `stable:1.5`.
    #[arg(long, value_parser = config::parse_process)]
    pub process: Option<ProcessSpec>,
    #[arg(long, value_delimiter = ',')]
    pub eps: Option<Vec<f64>>,
    /// Local-time levels for `--lacey`.
    #[arg(long, value_delimiter = ',')]
    pub u: Option<Vec<f64>>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Comma-separated chain, inner first: `bm`, `fbm:H`, `fbm-true:H`, `stable:A`, `stable-unit:A`, `subordinator:A`.
    #[arg(long, value_delimiter = ',', value_parser = config::parse_process, default_value = "bm")]
    pub process: Vec<ProcessSpec>,
    /// Grid points on [0,1] (inner grid for a chain).
    #[arg(long)]
    pub points: Option<usize>,
    /// Outer grid points per unit length for a chain.
    #[arg(long)]
    pub grid_outer: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Constants(a) => commands::constants::run(&a, &cli.common),
        Command::Estimate(a) => commands::estimate::run(&a, &cli.common),
        Command::Entropy(a) => commands::entropy::run(&a, &cli.common),
        Command::Simulate(a) => commands::simulate::run(&a, &cli.common),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Usage errors exit with 1; 2 is reserved for failed verification.
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
