//! Command-line front end for the digital-search-tree statistics
//! library: exact expectation tables, the asymptotic growth constant,
//! Monte Carlo runs, side-by-side comparisons, and tree construction
//! from explicit bit strings — all emitted as CSV or JSON records for
//! downstream harnesses and plotters.

pub mod commands;
pub mod ingest;
pub mod output;

use clap::{Args, Parser, Subcommand};
use output::Format;
use std::path::PathBuf;

/// How an invocation failed and what the process should do about it.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or unreadable/ill-formed input. Exit status 2.
    Usage(String),
    /// An internal consistency check failed (routes that must agree did
    /// not). Exit status 1; output produced before the failure is kept
    /// so the disagreement stays visible.
    Internal {
        /// Rendered report, when one was produced.
        output: Option<String>,
        /// What disagreed.
        message: String,
    },
}

impl Failure {
    /// Process exit status for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Internal { .. } => 1,
        }
    }

    /// Human-readable description for stderr.
    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) => m,
            Failure::Internal { message, .. } => message,
        }
    }
}

/// Top-level argument surface.
#[derive(Parser)]
#[command(
    name = "dstprot",
    version,
    about = "Protected-node statistics of random digital search trees"
)]
pub struct Cli {
    /// Selected subcommand.
    #[command(subcommand)]
    pub command: Command,
}

/// One subcommand per library view. Each variant's doc comment is the
/// `--help` text and carries that command's CSV schema.
#[derive(Subcommand)]
pub enum Command {
    /// Exact expected 2-protected counts for every size up to --n.
    ///
    /// CSV columns: n; l_n (exact fraction in lowest terms); ratio
    /// (l_n/n to 15 digits, empty at n = 0); agreement (yes/no under
    /// --method both, empty otherwise).
    Exact(ExactArgs),
    /// The asymptotic growth constant to a requested precision.
    ///
    /// CSV columns: constant (the slope, rounded to --digits);
    /// truncation_index (last series index included); tail_bound
    /// (rigorous bound on the discarded tail, at working precision).
    Constant(ConstantArgs),
    /// Monte Carlo estimate of a tree statistic.
    ///
    /// CSV columns: mean; variance; std_error; ci_low and ci_high (95%
    /// normal interval); exact_reference (exact expectation as a
    /// fraction, when the size admits one; empty otherwise); z_score
    /// (standardized deviation of the mean from the reference).
    Simulate(SimulateArgs),
    /// Exact, asymptotic, and simulated views of the same sizes.
    ///
    /// CSV columns per size: n; exact_ratio (l_n/n to --digits);
    /// constant (the asymptotic slope, same digits); residual
    /// (exact_ratio - constant); mc_ratio with mc_ratio_ci_low and
    /// mc_ratio_ci_high (Monte Carlo 2-protected count over n);
    /// log2n_frac (fractional part of log2 n — the oscillation phase).
    Compare(CompareArgs),
    /// One tree built from a file of bit strings.
    ///
    /// CSV columns: nodes; leaves; protected_count (nodes at distance
    /// >= k from every descendant leaf); protected_set (their labels,
    /// ;-joined); tree (parenthesized rendering, - marks an absent
    /// child).
    Build(BuildArgs),
}

/// Arguments of `exact`.
///
/// CSV columns: `n`, `l_n` (exact fraction in lowest terms), `ratio`
/// (l_n/n to 15 digits, empty at n = 0), `agreement` (yes/no under
/// `--method both`, empty otherwise).
#[derive(Args)]
pub struct ExactArgs {
    /// Largest size N; rows cover n = 0..=N.
    #[arg(long)]
    pub n: usize,
    /// Evaluation route for the table.
    #[arg(long, value_enum, default_value = "both")]
    pub method: Method,
    /// Size cap guarding against accidental huge exact runs.
    #[arg(long, default_value_t = 2000)]
    pub max_n: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Table evaluation route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    /// Direct recursion on the expectation sequence.
    Recursion,
    /// Closed-form double sum.
    ClosedForm,
    /// Both routes, with a per-row agreement check.
    Both,
}

/// Arguments of `constant`.
///
/// CSV columns: `constant` (the slope, rounded to `--digits`),
/// `truncation_index` (last series index included), `tail_bound`
/// (rigorous bound on the discarded tail, at working precision).
#[derive(Args)]
pub struct ConstantArgs {
    /// Decimal digits to report, between 1 and 1000.
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Arguments of `simulate`.
///
/// CSV columns: `mean`, `variance`, `std_error`, `ci_low`, `ci_high`
/// (95% normal interval), `exact_reference` (exact expectation as a
/// fraction, when the size admits one; empty otherwise), `z_score`
/// (standardized deviation of the mean from the reference).
#[derive(Args)]
pub struct SimulateArgs {
    /// Tree size per trial.
    #[arg(long)]
    pub n: usize,
    /// Number of independent trees.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Base seed; trial i draws from stream i keyed on it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Statistic measured on each tree.
    #[arg(long, value_enum, default_value = "protected2")]
    pub statistic: StatisticArg,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Per-tree statistic selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum StatisticArg {
    /// Number of 2-protected nodes.
    Protected2,
    /// Number of leaves.
    Leaves,
}

/// Arguments of `compare`.
///
/// CSV columns per size: `n`, `exact_ratio` (l_n/n to `--digits`),
/// `constant` (the asymptotic slope, same digits), `residual`
/// (exact_ratio − constant), `mc_ratio`, `mc_ratio_ci_low`,
/// `mc_ratio_ci_high` (Monte Carlo 2-protected count over n),
/// `log2n_frac` (fractional part of log2 n — the oscillation phase).
#[derive(Args)]
pub struct CompareArgs {
    /// Comma-separated sizes, e.g. 32,64,128.
    #[arg(long)]
    pub n_list: String,
    /// Monte Carlo trials per size.
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Base seed for the Monte Carlo runs.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Digits for the exact-ratio, constant, and residual columns.
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    /// Size cap guarding against accidental huge exact runs.
    #[arg(long, default_value_t = 2000)]
    pub max_n: usize,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Arguments of `build`.
///
/// CSV columns: `nodes`, `leaves`, `protected_count` (nodes at distance
/// ≥ k from every descendant leaf), `protected_set` (their labels,
/// `;`-joined), `tree` (parenthesized rendering; `-` marks an absent
/// child).
#[derive(Args)]
pub struct BuildArgs {
    /// Input file: one record per line, `bits` or `label:bits`; `#`
    /// starts a comment, blank lines are skipped.
    #[arg(long)]
    pub input: PathBuf,
    /// Protection depth to count.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// Executes the parsed invocation, returning the rendered report.
pub fn run(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Exact(args) => commands::cmd_exact(args),
        Command::Constant(args) => commands::cmd_constant(args),
        Command::Simulate(args) => commands::cmd_simulate(args),
        Command::Compare(args) => commands::cmd_compare(args),
        Command::Build(args) => commands::cmd_build(args),
    }
}
