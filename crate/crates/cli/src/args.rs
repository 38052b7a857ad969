use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use glasner_core::search::{GeneratorKind, Strategy};
use glasner_core::Metric;
use serde::Serialize;

#[derive(Parser, Debug, Serialize)]
#[command(
    name = "glasner",
    version,
    about = "Densification experiments for prime-indexed polynomial matrix families on tori"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Certify whether a point set is eps-dense (exit 0 dense, 1 not dense, 2 unknown).
    Density(DensityArgs),
    /// Search a matrix family for a member whose image of the point set is eps-dense (exit 0 iff found).
    Search(SearchArgs),
    /// Run a module's check suite (exit 0 iff every check passes).
    Verify(VerifyArgs),
    /// Empirical k(eps) scan over generated point sets.
    Scan(ScanArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct Common {
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct DensityArgs {
    /// Point set JSON file.
    pub points: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Sup)]
    pub metric: MetricArg,
    /// Grid resolution for dimensions above one.
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct SearchArgs {
    /// Family JSON file.
    pub family: PathBuf,
    /// Point set JSON file.
    pub points: PathBuf,
    #[arg(long)]
    pub eps: f64,
    #[arg(long, value_enum, default_value_t = MetricArg::Sup)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    /// Search over the first N primes; also caps the assignments tested.
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(subcommand)]
    pub suite: Suite,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "suite", rename_all = "kebab-case")]
pub enum Suite {
    /// Bump function construction: normalization, decay, support, L2 mass, tail.
    Bump(BumpArgs),
    /// Exponential sums: oracle agreement, complete-sum and averaged-sum slopes.
    Expsum(ExpsumArgs),
    /// Pair counts: H_b bounds and the growth exponent of the weighted pair sum.
    Paircount(PaircountArgs),
    /// Multiplicative complexity witness trials.
    Multcomp(MultcompArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct BumpArgs {
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Fourier table size.
    #[arg(long, default_value_t = 10_000)]
    pub m_max: usize,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ExpsumArgs {
    /// Polynomial with integer coefficients, e.g. "x^2".
    #[arg(long, default_value = "x^2")]
    pub f: String,
    /// Largest odd prime modulus.
    #[arg(long, default_value_t = 2000)]
    pub bmax: u64,
    /// Frequency cutoff T for the averaged sums.
    #[arg(long = "T", default_value_t = 50)]
    pub t: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct PaircountArgs {
    #[arg(long, default_value_t = 200)]
    pub k: usize,
    /// Denominator bound of the random sets.
    #[arg(long = "D", default_value_t = 50)]
    pub d: u64,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Number of random sets.
    #[arg(long, default_value_t = 10)]
    pub sets: usize,
    /// Exponent r of the weighted pair sum.
    #[arg(long, default_value_t = 0.4)]
    pub r: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct MultcompArgs {
    /// Family JSON file; defaults to the two built-in families.
    #[arg(long)]
    pub family: Option<PathBuf>,
    /// Frequency vector, comma separated (length n).
    #[arg(long, value_delimiter = ',')]
    pub mvec: Option<Vec<i64>>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub qmax: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Serialize)]
pub struct ScanArgs {
    /// Family JSON file.
    pub family: PathBuf,
    /// Strictly decreasing eps values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub schedule: Vec<f64>,
    #[arg(long, value_enum, default_value_t = GeneratorArg::Random)]
    pub generator: GeneratorArg,
    /// Denominator bound for the random generator.
    #[arg(long = "D", default_value_t = 10_000)]
    pub d: u64,
    /// Ball radius for the cluster generator.
    #[arg(long, default_value_t = 0.01)]
    pub rho: f64,
    /// Draws per set size; success needs a strict majority.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Largest set size tried.
    #[arg(long, default_value_t = 1 << 16)]
    pub k_max: usize,
    #[arg(long, value_enum, default_value_t = MetricArg::Sup)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
    #[arg(long, value_enum, default_value_t = StrategyArg::Exhaustive)]
    pub strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricArg {
    Sup,
    Euclidean,
}

impl From<MetricArg> for Metric {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Sup => Metric::Sup,
            MetricArg::Euclidean => Metric::Euclidean,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    Exhaustive,
    RandomSample,
    GreedyRowwise,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Exhaustive => Strategy::Exhaustive,
            StrategyArg::RandomSample => Strategy::RandomSample,
            StrategyArg::GreedyRowwise => Strategy::GreedyRowwise,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorArg {
    Ball,
    HalfGrid,
    Ap,
    Random,
}

impl From<GeneratorArg> for GeneratorKind {
    fn from(g: GeneratorArg) -> Self {
        match g {
            GeneratorArg::Ball => GeneratorKind::BallCluster,
            GeneratorArg::HalfGrid => GeneratorKind::HalfGrid,
            GeneratorArg::Ap => GeneratorKind::ArithmeticProgression,
            GeneratorArg::Random => GeneratorKind::RandomBoundedDenominator,
        }
    }
}
