//! Command definitions and dispatch.

pub mod eval;
pub mod info;
pub mod predict;
pub mod split;
pub mod subspaces;
pub mod synth;
pub mod train;

use clap::{Parser, Subcommand};

/// Errors a command can surface, split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad or inconsistent flags — exit code 1.
    Usage(String),
    /// A library error — exit code 3 for numerical failures, 2 otherwise.
    Core(lctl::Error),
}

impl From<lctl::Error> for CliError {
    fn from(err: lctl::Error) -> Self {
        CliError::Core(err)
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Core(lctl::Error::from(err))
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lctl",
    version,
    about = "Train, apply, and evaluate transform-learning classifiers",
    after_help = "Set LCTL_LOG=info (or debug) for progress logging on stderr."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model on labeled data and write it as JSON
    Train(train::TrainArgs),
    /// Classify samples with a trained model
    Predict(predict::PredictArgs),
    /// Score predictions: per-class accuracy, OA, AA, Kappa
    Eval(eval::EvalArgs),
    /// Draw a per-class train/test split and write index files
    Split(split::SplitArgs),
    /// Generate a planted synthetic dataset
    Synth(synth::SynthArgs),
    /// Count the subspaces a sparse model can address
    Subspaces(subspaces::SubspacesArgs),
    /// Print a saved model's configuration
    Info(info::InfoArgs),
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Train(args) => train::run(args),
        Command::Predict(args) => predict::run(args),
        Command::Eval(args) => eval::run(args),
        Command::Split(args) => split::run(args),
        Command::Synth(args) => synth::run(args),
        Command::Subspaces(args) => subspaces::run(args),
        Command::Info(args) => info::run(args),
    }
}

/// Clap value parser for the threshold convention flag.
pub fn parse_convention(s: &str) -> Result<lctl::ThresholdConvention, String> {
    s.parse().map_err(|err: lctl::Error| err.to_string())
}
