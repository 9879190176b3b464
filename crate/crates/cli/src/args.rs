use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use margin_mcmc::{Algorithm, Statistic, DEFAULT_STATE_CAP};

#[derive(Debug, Parser)]
#[command(name = "margin-mcmc", version, about = "Sample and analyse binary matrices with fixed row and column sums")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count (and optionally list) every matrix with the given margins.
    Enumerate(EnumerateArgs),
    /// Write a chain's exact transition matrix as CSV.
    Kernel(KernelArgs),
    /// Write total-variation distance to uniform after k steps as CSV.
    Tv(TvArgs),
    /// Run a chain and write the retained states.
    Sample(SampleArgs),
    /// Run a chain and write the trace of a statistic as CSV.
    Estimate(EstimateArgs),
    /// Count successful swaps on random Bernoulli matrices.
    Benchmark(BenchmarkArgs),
}

#[derive(Debug, Clone, Args)]
pub struct MarginArgs {
    /// Comma-separated row sums, e.g. 1,2,1.
    #[arg(long, value_delimiter = ',', required = true)]
    pub row_sums: Vec<usize>,
    /// Comma-separated column sums.
    #[arg(long, value_delimiter = ',', required = true)]
    pub col_sums: Vec<usize>,
    /// Give up once more than this many states are found.
    #[arg(long, default_value_t = DEFAULT_STATE_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    pub margins: MarginArgs,
    /// Also print every state, separated by blank lines.
    #[arg(long)]
    pub dump: bool,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    #[command(flatten)]
    pub margins: MarginArgs,
    #[arg(long, value_parser = parse_algorithm)]
    pub algorithm: Algorithm,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TvArgs {
    #[command(flatten)]
    pub margins: MarginArgs,
    #[arg(long)]
    pub k_max: usize,
    /// Restrict to these algorithms (comma-separated); all three by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algorithm: Vec<Algorithm>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Matrix file in the text format, or the name of an embedded dataset.
    #[arg(long)]
    pub input: String,
    #[arg(long, value_parser = parse_algorithm)]
    pub algorithm: Algorithm,
    #[arg(long)]
    pub iterations: u64,
    #[arg(long, env = "MARGIN_MCMC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub burn_in: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub thin: u64,
    /// Run on the full matrix instead of removing rows and columns whose
    /// cells are all forced by the margins.
    #[arg(long)]
    pub no_strip: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Print iterations, successful swaps, wall time and time per swap.
    #[arg(long)]
    pub report: bool,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, default_value = "s2", value_parser = parse_statistic)]
    pub stat: Statistic,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long, default_value_t = 100)]
    pub rows: usize,
    #[arg(long, default_value_t = 100)]
    pub cols: usize,
    /// Comma-separated fill probabilities.
    #[arg(long, value_delimiter = ',', required = true)]
    pub fill: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub iterations: u64,
    /// Base seed; replicate `i` uses `seed + i`.
    #[arg(long, env = "MARGIN_MCMC_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicates: u64,
    /// Algorithms to compare (comma-separated); swap and rectangle-loop by default.
    #[arg(long, value_delimiter = ',', value_parser = parse_algorithm)]
    pub algorithm: Vec<Algorithm>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: margin_mcmc::chains::UnknownAlgorithm| e.to_string())
}

fn parse_statistic(s: &str) -> Result<Statistic, String> {
    s.parse().map_err(|e: margin_mcmc::StatsError| e.to_string())
}
