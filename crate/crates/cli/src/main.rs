//! `mvote`: run voting rules, compute worst-case distortion certificates,
//! generate the named lower-bound instances and random ones, and batch
//! experiments to CSV.
//!
//! Exit codes: 0 success, 1 internal invariant violation, 2 usage or
//! input error.

mod commands;
mod io;
mod rulespec;

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mvote", version, about = "metric-distortion voting toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a voting rule on an election file.
    Analyze(AnalyzeArgs),
    /// Worst-case social-cost ratio of an outcome over all consistent
    /// decisive metrics.
    Distortion(DistortionArgs),
    /// Generate a named instance into a directory.
    Construct(ConstructArgs),
    /// Sample a random geometric instance.
    Random(RandomArgs),
    /// Run rules over many instances and write a CSV report.
    Batch(BatchArgs),
    /// Tail-cost (top-k) report over a provided metric.
    Fairness(FairnessArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    election: PathBuf,
    /// One of: plurality-matching, uniform-matching,
    /// `matching:<p-file>:<q-file>`, random-dictatorship,
    /// smart-dictatorship, gps, condorcet, copeland.
    #[arg(long)]
    rule: String,
    /// Decisiveness parameter as a rational `p/q` (required by
    /// smart-dictatorship and gps).
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    json: bool,
    /// Draw a winner from the lottery instead of only reporting it.
    #[arg(long, requires = "seed")]
    sample: bool,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DistortionArgs {
    #[arg(long)]
    election: PathBuf,
    /// Degenerate outcome on this candidate.
    #[arg(long, conflicts_with = "rule")]
    candidate: Option<usize>,
    /// Or: outcome of this rule.
    #[arg(long)]
    rule: Option<String>,
    #[arg(long)]
    alpha: String,
    /// Fix the reference candidate instead of maximizing over all.
    #[arg(long)]
    reference: Option<usize>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ConstructArgs {
    /// Instance name; `mvote construct list` prints the catalog.
    name: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
}

#[derive(Args)]
struct RandomArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long)]
    seed: u64,
    /// Redraw until the instance is alpha-decisive for alpha <= this cap.
    #[arg(long)]
    alpha_cap: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BatchArgs {
    /// Glob over election files (quote it to bypass shell expansion).
    #[arg(long)]
    instances: String,
    /// Comma-separated rule names.
    #[arg(long)]
    rules: String,
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    csv: PathBuf,
    /// Record wall-clock milliseconds per row (off by default so reruns
    /// are byte-identical).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct FairnessArgs {
    #[arg(long)]
    metric: PathBuf,
    #[arg(long)]
    candidate: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    json: bool,
}

/// Failure with a chosen process exit code.
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("MVOTE_THREADS") {
        if let Ok(threads) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build_global();
        }
    }
    let result = match cli.command {
        Command::Analyze(args) => commands::analyze(args),
        Command::Distortion(args) => commands::distortion(args),
        Command::Construct(args) => commands::construct(args),
        Command::Random(args) => commands::random(args),
        Command::Batch(args) => commands::batch(args),
        Command::Fairness(args) => commands::fairness(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
