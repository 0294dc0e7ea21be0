//! `lctl info` — print a saved model's configuration.

use std::path::PathBuf;

use lctl::data::model_file::load_model;

use crate::commands::CliError;

#[derive(Debug, clap::Args)]
pub struct InfoArgs {
    /// Model file from `lctl train`
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,
}

pub fn run(args: InfoArgs) -> Result<(), CliError> {
    let model = load_model(&args.model)?;
    let hp = model.hyperparams();
    println!(
        "model: {} atoms x {} features, {} classes",
        model.atom_count(),
        model.feature_count(),
        model.class_count()
    );
    println!("lambda: {}", hp.lambda);
    println!(
        "mu: {} ({} threshold convention, shrink threshold {})",
        hp.mu,
        hp.threshold_convention,
        hp.shrink_threshold()
    );
    println!("seed: {}", model.seed());
    match model.objective_trace() {
        [] => println!("objective trace: (empty)"),
        trace => println!(
            "objective trace: {} values, final objective {}",
            trace.len(),
            trace[trace.len() - 1]
        ),
    }
    Ok(())
}
