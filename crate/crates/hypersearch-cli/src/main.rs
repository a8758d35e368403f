//! Command-line front end: split, observe, tune, predict, evaluate, bench.
//!
//! Exit codes: 0 on success, 2 on precondition/configuration errors, 1 on
//! internal errors.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use hypersearch::ingest::{DatasetFormat, SplitMode};
use hypersearch::search::PruneMode;
use hypersearch::Ratio;

use config::RunConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Lib(hypersearch::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<hypersearch::Error> for CliError {
    fn from(e: hypersearch::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Lib(e) => e.exit_code(),
        }
    }
}

/// Search-based prediction of new hyperedges.
#[derive(Parser)]
#[command(name = "hypersearch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Output directory for artifacts (also the default config location).
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Config file; unset flags fall back to its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Dataset path (file for edge-list, file prefix for benson-3file).
    #[arg(long)]
    data: Option<PathBuf>,
    /// Dataset format: benson-3file or edge-list.
    #[arg(long)]
    format: Option<DatasetFormat>,
    /// Split mode: chronological or random.
    #[arg(long)]
    mode: Option<SplitMode>,
    /// RNG seed for random splitting / null sampling.
    #[arg(long)]
    seed: Option<u64>,
    /// Drop edges larger than this during preprocessing.
    #[arg(long)]
    max_edge_size: Option<usize>,
    /// Drop edge sizes rarer than this fraction during preprocessing.
    #[arg(long)]
    rare_size_threshold: Option<f64>,
    /// Number of predictions as a multiple of the unique test-set count.
    #[arg(long)]
    k_multiplier: Option<f64>,
    /// Per-node relaxation ratio, as p/q.
    #[arg(long)]
    eps_v: Option<Ratio>,
    /// Per-edge relaxation ratio, as p/q.
    #[arg(long)]
    eps_e: Option<Ratio>,
    /// Total relaxation ratio, as p/q.
    #[arg(long)]
    eps_t: Option<Ratio>,
    /// Time-weight coefficient.
    #[arg(long)]
    tau: Option<f64>,
    /// Feature-weight exponent.
    #[arg(long)]
    alpha: Option<f64>,
    /// Pruning mode: paper, strict, or off.
    #[arg(long)]
    prune_mode: Option<PruneMode>,
    /// Worker threads; 1 is the determinism mode.
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse, preprocess, and split a dataset; writes the split manifest.
    Split(CommonArgs),
    /// Compute overlap/temporal/feature observation tables for a split.
    Observe {
        #[command(flatten)]
        common: CommonArgs,
        /// Observations to run (repeatable): overlap, temporal, feature.
        #[arg(long = "obs", default_values = ["overlap"])]
        obs: Vec<String>,
    },
    /// Grid-search relaxation and weighting parameters on the validation set.
    Tune(CommonArgs),
    /// Rank candidate hyperedges for a split.
    Predict {
        #[command(flatten)]
        common: CommonArgs,
        /// Run the tuning grid first and predict with the winner.
        #[arg(long)]
        tune: bool,
    },
    /// Score a prediction report against the held-out test edges.
    Evaluate(CommonArgs),
    /// Time prediction on replicated synthetic hypergraphs.
    Bench {
        #[command(flatten)]
        common: CommonArgs,
        /// Largest replication factor to time.
        #[arg(long, default_value_t = 5)]
        scales: u32,
    },
}

impl CommonArgs {
    fn flag_layer(&self) -> RunConfig {
        RunConfig {
            data: self.data.clone(),
            format: self.format,
            mode: self.mode,
            seed: self.seed,
            max_edge_size: self.max_edge_size,
            rare_size_threshold: self.rare_size_threshold,
            k_multiplier: self.k_multiplier,
            eps_v: self.eps_v,
            eps_e: self.eps_e,
            eps_t: self.eps_t,
            tau: self.tau,
            alpha: self.alpha,
            prune_mode: self.prune_mode,
            workers: self.workers,
        }
    }

    /// Flags over file layer over defaults; the result is persisted.
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let file = config::load_file_layer(&self.out, self.config.as_deref())?;
        let resolved = self.flag_layer().layered_over(file);
        config::persist(&self.out, &resolved)?;
        Ok(resolved)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Split(common) => commands::cmd_split(&common.out, &common.resolve()?),
        Command::Observe { common, obs } => {
            commands::cmd_observe(&common.out, &common.resolve()?, obs)
        }
        Command::Tune(common) => commands::cmd_tune(&common.out, &common.resolve()?),
        Command::Predict { common, tune } => {
            commands::cmd_predict(&common.out, &common.resolve()?, *tune)
        }
        Command::Evaluate(common) => commands::cmd_evaluate(&common.out, &common.resolve()?),
        Command::Bench { common, scales } => {
            commands::cmd_bench(&common.out, &common.resolve()?, *scales)
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
