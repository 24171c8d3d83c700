//! Command-line surface. Every argument struct serializes into the run
//! manifest's `config` echo.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rowtopk::{SearchConfig, Workers};
use serde::{Serialize, Serializer};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "rowtopk",
    version,
    about = "Row-wise top-k selection by threshold bisection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded N(0,1) matrix as an RTKM file
    Gen(GenArgs),
    /// Select the top k of every row of an RTKM file into an RTKR file
    Run(RunArgs),
    /// Exit-iteration histogram of the exact search
    StatsExit(StatsExitArgs),
    /// Error and hit rates of early-stop selection
    StatsEarlystop(StatsEarlyStopArgs),
    /// Expected exit iteration from the normal model
    Theory(TheoryArgs),
    /// Check exact selection against a full sort; exits with 2 on mismatch
    Verify(VerifyArgs),
    /// Time batch selection against the per-row sort baseline
    Bench(BenchArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Run(_) => "run",
            Command::StatsExit(_) => "stats-exit",
            Command::StatsEarlystop(_) => "stats-earlystop",
            Command::Theory(_) => "theory",
            Command::Verify(_) => "verify",
            Command::Bench(_) => "bench",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct OutputArgs {
    /// Write CSV here, with a run manifest next to it
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print CSV instead of an aligned table
    #[arg(long)]
    pub csv: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[arg(short = 'n', long)]
    pub rows: usize,
    #[arg(short = 'm', long)]
    pub cols: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "display")]
    pub workers: Workers,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Exact,
    EarlyStop,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RunArgs {
    /// Input RTKM matrix
    pub matrix: PathBuf,
    #[arg(short, long)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    pub mode: Mode,
    /// Relative precision of the exact search
    #[arg(long, default_value_t = 0.0)]
    pub epsilon_rel: f64,
    /// Iteration budget in early-stop mode
    #[arg(long, default_value_t = 4)]
    pub max_iter: u32,
    #[arg(long, default_value_t = SearchConfig::DEFAULT_HARD_CAP)]
    pub hard_cap: u32,
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "display")]
    pub workers: Workers,
    /// Output RTKR file
    #[arg(long)]
    pub out: PathBuf,
}

impl RunArgs {
    pub fn search(&self) -> SearchConfig {
        match self.mode {
            Mode::Exact => SearchConfig::exact(self.epsilon_rel),
            Mode::EarlyStop => SearchConfig::early_stop(self.max_iter),
        }
        .with_hard_cap(self.hard_cap)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatsExitArgs {
    /// Row length M
    #[arg(short = 'm', long, default_value_t = 256)]
    pub cols: usize,
    #[arg(short, long, value_delimiter = ',', default_values_t = [16, 32, 64, 96, 128])]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 1e-4)]
    pub epsilon_rel: f64,
    #[arg(long, default_value_t = SearchConfig::DEFAULT_HARD_CAP)]
    pub hard_cap: u32,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "display")]
    pub workers: Workers,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StatsEarlyStopArgs {
    #[arg(short = 'm', long, default_value_t = 256)]
    pub cols: usize,
    #[arg(short, long, value_delimiter = ',', default_values_t = [16, 32, 64, 96, 128])]
    pub k: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 5, 6, 7, 8])]
    pub max_iter: Vec<u32>,
    #[arg(long, default_value_t = 100_000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "display")]
    pub workers: Workers,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TheoryArgs {
    /// Row lengths; crossed with `--k`. Without both, the standard 14-pair grid
    #[arg(short = 'm', long, value_delimiter = ',', requires = "k")]
    pub cols: Vec<usize>,
    #[arg(short, long, value_delimiter = ',', requires = "cols")]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub mu: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(short = 'm', long, value_delimiter = ',', default_values_t = [1, 2, 7, 256, 1024])]
    pub cols: Vec<usize>,
    /// Values of k; pairs with k > M are skipped. Default: 1, M/4, M/2, M-1, M
    #[arg(short, long, value_delimiter = ',')]
    pub k: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    #[serde(serialize_with = "display")]
    pub workers: Workers,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BenchMode {
    Exact,
    EarlyStop,
    /// Per-row full sort, then the first k
    Sort,
}

impl BenchMode {
    pub fn name(self) -> &'static str {
        match self {
            BenchMode::Exact => "exact",
            BenchMode::EarlyStop => "early-stop",
            BenchMode::Sort => "sort",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BenchArgs {
    #[arg(short = 'n', long, value_delimiter = ',', default_values_t = [1 << 14])]
    pub rows: Vec<usize>,
    #[arg(short = 'm', long, value_delimiter = ',', default_values_t = [256])]
    pub cols: Vec<usize>,
    #[arg(short, long, value_delimiter = ',', default_values_t = [32])]
    pub k: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [BenchMode::Exact, BenchMode::Sort])]
    pub mode: Vec<BenchMode>,
    #[arg(long, value_delimiter = ',', default_value = "auto")]
    #[serde(serialize_with = "display_all")]
    pub workers: Vec<Workers>,
    /// Timed runs per configuration (at least 5)
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// Untimed runs before timing (at least 1)
    #[arg(long, default_value_t = 1)]
    pub warmup: usize,
    #[arg(long, default_value_t = 0.0)]
    pub epsilon_rel: f64,
    #[arg(long, default_value_t = 4)]
    pub max_iter: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_all<T: std::fmt::Display, S: Serializer>(v: &[T], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(ToString::to_string))
}
