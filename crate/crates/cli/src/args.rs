use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "sqrtlab", version, about = "Modular square roots of primes: discrepancy, exponential sums, averages")]
#[command(args_override_self = true, propagate_version = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Plain,
    Json,
    Csv,
}

/// Options shared by every subcommand; none of them enters the cache key.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write results here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flat TOML file of `flag = value` pairs; flags on the command line win
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Result cache directory (overridden by SQRTLAB_CACHE_DIR)
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Never read or write the cache
    #[arg(long)]
    pub no_cache: bool,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Full,
    Sample,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct StrategyArgs {
    /// How the maximum over lambda is taken
    #[arg(long, value_enum, default_value_t = StrategyKind::Full)]
    pub strategy: StrategyKind,
    /// Number of lambdas drawn per modulus with --strategy sample
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    /// Seed of the sampling stream
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Largest q for which full enumeration is allowed
    #[arg(long, default_value_t = sqrtlab_core::roots::DEFAULT_FULL_LAMBDA_THRESHOLD)]
    pub full_threshold: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterKind {
    All,
    Dyadic,
    Range,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FilterArgs {
    /// Which primes q <= Q are averaged over
    #[arg(long, value_enum, default_value_t = FilterKind::All)]
    pub filter: FilterKind,
    /// Lower end of --filter range
    #[arg(long)]
    pub q_lo: Option<u64>,
    /// Upper end of --filter range
    #[arg(long)]
    pub q_hi: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Ones,
    Random,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Primes up to a limit
    Sieve {
        #[command(flatten)]
        args: SieveArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Square roots of a modulo a prime q
    Sqrt {
        #[command(flatten)]
        args: SqrtArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Jacobi symbol (k/q)
    Jacobi {
        #[command(flatten)]
        args: JacobiArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Quadratic Gauss sum, direct and closed form
    Gauss {
        #[command(flatten)]
        args: GaussArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Exact discrepancy of the roots of lambda*p for primes p <= P
    Discrepancy {
        #[command(flatten)]
        args: DiscrepancyArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Maximum discrepancy over lambda
    Maxlambda {
        #[command(flatten)]
        args: MaxLambdaArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Weyl sum over square roots of primes (or prime powers with --mangoldt)
    Weyl {
        #[command(flatten)]
        args: WeylArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Bilinear form W over square roots
    Bilinear {
        #[command(flatten)]
        args: BilinearArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Incomplete square-root sum
    Incomplete {
        #[command(flatten)]
        args: IncompleteArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Closed-form bounds
    Bounds {
        #[command(flatten)]
        args: BoundsArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Check the Heath-Brown identity against the von Mangoldt function
    HbVerify {
        #[command(flatten)]
        args: HbArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Average over primes q <= Q of the maximal discrepancy
    Avg {
        #[command(flatten)]
        args: AvgArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Averages of the quadratic character over primes
    Charavg {
        #[command(flatten)]
        args: CharAvgArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Gap histogram of primes and small squares modulo q
    Spacings {
        #[command(flatten)]
        args: SpacingArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Grid sweep of averaged maximal discrepancy, written as CSV
    Sweep {
        #[command(flatten)]
        args: SweepArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in self-check suite
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SieveArgs {
    #[arg(long)]
    pub limit: u64,
    /// Print only the count
    #[arg(long)]
    pub count_only: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SqrtArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub a: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct JacobiArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long)]
    pub q: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GaussArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub a: u64,
    #[arg(long, default_value_t = 0)]
    pub b: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiscrepancyArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub p_max: f64,
    #[arg(long, default_value_t = 1)]
    pub lambda: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MaxLambdaArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub p_max: f64,
    #[command(flatten)]
    pub strategy: StrategyArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct WeylArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub h: u64,
    #[arg(long)]
    pub p_max: f64,
    /// Weight prime powers by the von Mangoldt function
    #[arg(long)]
    pub mangoldt: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BilinearArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub h: u64,
    /// Length of alpha
    #[arg(long)]
    pub m: usize,
    /// Length of beta
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = WeightKind::Ones)]
    pub weights: WeightKind,
    /// Seed for --weights random (beta uses seed + 1)
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Accept weights longer than q
    #[arg(long)]
    pub allow_wrap: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IncompleteArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, default_value_t = 1)]
    pub h: u64,
    #[arg(long)]
    pub w: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long)]
    pub p_max: f64,
    #[arg(long)]
    pub q_max: f64,
    /// M for the bilinear bounds (default: Q^{1/2})
    #[arg(long)]
    pub m: Option<f64>,
    /// N for the bilinear bounds (default: Q^{1/2})
    #[arg(long)]
    pub n: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HbArgs {
    #[arg(long)]
    pub j: u32,
    /// Cutoff of the Möbius factors (default: the smallest Z with Z^J >= n_max)
    #[arg(long)]
    pub z: Option<u64>,
    #[arg(long)]
    pub n_max: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AvgArgs {
    /// P (default: Q)
    #[arg(long)]
    pub p_max: Option<f64>,
    #[arg(long)]
    pub q_max: f64,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub strategy: StrategyArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CharAvgArgs {
    /// P (default: Q)
    #[arg(long)]
    pub p_max: Option<f64>,
    #[arg(long)]
    pub q_max: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpacingArgs {
    #[arg(long)]
    pub q: u64,
    /// Number of squares n^2, n <= n_max (default: floor(q / log q))
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SweepArgs {
    /// Comma-separated values of Q
    #[arg(long, value_delimiter = ',', required = true)]
    pub q_values: Vec<f64>,
    /// Comma-separated values of P (default: P = Q)
    #[arg(long, value_delimiter = ',')]
    pub p_values: Vec<f64>,
    #[command(flatten)]
    pub filter: FilterArgs,
    #[command(flatten)]
    pub strategy: StrategyArgs,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Sieve { common, .. }
            | Command::Sqrt { common, .. }
            | Command::Jacobi { common, .. }
            | Command::Gauss { common, .. }
            | Command::Discrepancy { common, .. }
            | Command::Maxlambda { common, .. }
            | Command::Weyl { common, .. }
            | Command::Bilinear { common, .. }
            | Command::Incomplete { common, .. }
            | Command::Bounds { common, .. }
            | Command::HbVerify { common, .. }
            | Command::Avg { common, .. }
            | Command::Charavg { common, .. }
            | Command::Spacings { common, .. }
            | Command::Sweep { common, .. }
            | Command::Verify { common } => common,
        }
    }
}
