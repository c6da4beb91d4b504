//! `privproj`: preprocess data, fit and apply projections, evaluate
//! classifiers and run utility/privacy sweeps from the command line.
//!
//! Exit codes: 0 on success, 1 on a runtime or numerical failure, 2 on a
//! usage or input error. `PRIVPROJ_THREADS` caps the worker threads
//! (0 or unset means one per core).

mod commands;
mod files;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use privproj::experiment::PrivacyScoring;
use privproj::Method;

#[derive(Parser)]
#[command(name = "privproj", version, about = "Privacy-preserving linear projections")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Clean, encode and balance a raw CSV file.
    ///
    /// Writes the feature matrix to --output and one label file per label
    /// column next to it, named <stem>.<label>.labels.csv.
    Preprocess(PreprocessArgs),
    /// Fit a projection on a preprocessed dataset and save it as JSON.
    Fit(FitArgs),
    /// Apply a saved projection to a preprocessed dataset.
    Project(ProjectArgs),
    /// Train a classifier and print its accuracy report as JSON.
    Evaluate(EvaluateArgs),
    /// Run a grid of projections and write the trade-off table, chart and
    /// run manifest.
    Sweep(SweepArgs),
    /// Redraw the chart of a saved trade-off table.
    Plot(PlotArgs),
}

#[derive(Args)]
pub struct PreprocessArgs {
    /// Raw CSV file.
    #[arg(long)]
    pub input: PathBuf,
    /// Column schema (JSON).
    #[arg(long)]
    pub schema: PathBuf,
    /// Group the seven Adult marital-status values into three classes.
    #[arg(long)]
    pub recode_census_marital: bool,
    /// Label columns to undersample to equal class counts.
    #[arg(long, value_delimiter = ',')]
    pub balance_on: Vec<String>,
    /// How several --balance-on labels are combined.
    #[arg(long, value_enum, default_value_t = BalanceArg::Sequential)]
    pub balance_mode: BalanceArg,
    /// Seed for the balancing and holdout draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output feature CSV.
    #[arg(long)]
    pub output: PathBuf,
    /// Hold out a fraction of every class of this label (after balancing),
    /// e.g. to build an identity test set from a training file.
    #[arg(long, requires_all = ["holdout_fraction", "holdout_output"])]
    pub holdout_on: Option<String>,
    /// Fraction of each class held out, in (0, 1).
    #[arg(long, requires = "holdout_on")]
    pub holdout_fraction: Option<f64>,
    /// Output feature CSV for the held-out rows.
    #[arg(long, requires = "holdout_on")]
    pub holdout_output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum BalanceArg {
    Sequential,
    Joint,
}

#[derive(Args)]
pub struct FitArgs {
    /// Preprocessed feature CSV (label files alongside).
    #[arg(long)]
    pub data: PathBuf,
    /// PCA, DCA, MDR, RUCA or RANDOM.
    #[arg(long, value_parser = parse_method)]
    pub method: Method,
    /// Number of components.
    #[arg(long)]
    pub k: usize,
    /// Utility label column (DCA, MDR, RUCA).
    #[arg(long)]
    pub utility: Option<String>,
    /// Privacy label columns (MDR uses the first, RUCA all).
    #[arg(long, value_delimiter = ',')]
    pub privacy: Vec<String>,
    /// RUCA privacy weights, one per privacy label.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub weights: Vec<f64>,
    /// Denominator ridge; resolved from the data when omitted.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Numerator ridge; resolved from the data when omitted.
    #[arg(long)]
    pub rho_prime: Option<f64>,
    /// Seed for the random projection.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output model JSON.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args)]
pub struct ProjectArgs {
    /// Model JSON written by `fit`.
    #[arg(long)]
    pub model: PathBuf,
    /// Preprocessed feature CSV.
    #[arg(long)]
    pub data: PathBuf,
    /// Output feature CSV; the input's label files are copied next to it.
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub train: PathBuf,
    #[arg(long)]
    pub test: PathBuf,
    /// Label column to predict.
    #[arg(long)]
    pub label: String,
    #[arg(long, value_enum, default_value_t = ClassifierArg::Knn)]
    pub classifier: ClassifierArg,
    /// Neighbours for k-NN (odd).
    #[arg(long, default_value_t = 5)]
    pub k_neighbors: usize,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ClassifierArg {
    Knn,
    Centroid,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Experiment configuration (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Preprocessed training set.
    #[arg(long)]
    pub train: PathBuf,
    /// Preprocessed test set.
    #[arg(long)]
    pub test: PathBuf,
    /// Separate test set for the privacy tasks.
    #[arg(long)]
    pub privacy_test: Option<PathBuf>,
    /// Master seed; overrides the seed in the configuration.
    #[arg(long)]
    pub seed: u64,
    /// Directory for tradeoff.csv, tradeoff.svg and manifest.json.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args)]
pub struct PlotArgs {
    /// Trade-off table written by `sweep`.
    #[arg(long)]
    pub input: PathBuf,
    /// Output SVG.
    #[arg(long)]
    pub output: PathBuf,
    /// Privacy accuracy on the x axis: the first task or the worst case.
    #[arg(long, value_enum, default_value_t = ScoringArg::First)]
    pub scoring: ScoringArg,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum ScoringArg {
    First,
    Max,
}

impl From<ScoringArg> for PrivacyScoring {
    fn from(s: ScoringArg) -> Self {
        match s {
            ScoringArg::First => PrivacyScoring::First,
            ScoringArg::Max => PrivacyScoring::Max,
        }
    }
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: privproj::Error| e.to_string())
}

/// A failed command: the exit code, the stage that failed and why.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub stage: &'static str,
    pub message: String,
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var("PRIVPROJ_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().map_err(|_| Failure {
        code: 2,
        stage: "PRIVPROJ_THREADS",
        message: format!("expected a non-negative integer, got {raw:?}"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure {
            code: 1,
            stage: "thread pool",
            message: e.to_string(),
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Preprocess(a) => commands::preprocess(a),
        Command::Fit(a) => commands::fit(a),
        Command::Project(a) => commands::project(a),
        Command::Evaluate(a) => commands::evaluate(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Plot(a) => commands::plot(a),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}: {}", f.stage, f.message);
            ExitCode::from(f.code)
        }
    }
}
