//! `lctl train` — fit a model and write it (plus a manifest) to disk.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use lctl::data::csv::load_indices;
use lctl::data::model_file::save_model;
use lctl::trainer::train_lctl;
use lctl::{Hyperparams, LabelMatrix, ThresholdConvention};

use crate::commands::{parse_convention, CliError};
use crate::data_args::DataArgs;
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub data: DataArgs,

    /// Train only on the 0-based sample indices listed in this file (one
    /// per line, e.g. a `.train.idx` file from `lctl split`)
    #[arg(long, value_name = "FILE")]
    pub train_idx: Option<PathBuf>,

    /// Number of transform rows (atoms); must not exceed the feature count
    #[arg(long, default_value_t = 40)]
    pub atoms: usize,

    /// Transform regularization weight
    #[arg(long, default_value_t = 0.1)]
    pub lambda: f64,

    /// Sparsity weight
    #[arg(long, default_value_t = 0.05)]
    pub mu: f64,

    /// Outer alternating iterations; 0 writes the raw initialization
    /// (smoke mode)
    #[arg(long, default_value_t = 50)]
    pub iters: usize,

    /// Relative objective change below which training stops early
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    /// Seed for every random choice in the run
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Shrink threshold convention: "exact" (threshold mu/2) or "paper"
    /// (threshold mu)
    #[arg(long, default_value = "exact", value_parser = parse_convention)]
    pub threshold_convention: ThresholdConvention,

    /// Output model file (JSON); the manifest lands next to it
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
}

pub fn run(args: TrainArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let loaded = args.data.load(true)?;
    let mut inputs = loaded.inputs.clone();
    let all_labels = loaded.labels.expect("labels required by load(true)");
    // class indexing always follows the full label file so that subset
    // training never renumbers classes
    let classes = all_labels.iter().max().expect("non-empty") + 1;

    let (x, labels) = match &args.train_idx {
        Some(path) => {
            let indices = load_indices(path)?;
            inputs.push(path.clone());
            let x = loaded.features.select_samples(&indices)?;
            // select_samples already validated the index range
            let labels: Vec<usize> = indices.iter().map(|&i| all_labels[i]).collect();
            (x, labels)
        }
        None => (loaded.features, all_labels),
    };

    let d = x.feature_count();
    if args.atoms == 0 || args.atoms > d {
        return Err(CliError::Usage(format!(
            "--atoms {} is out of range: the transform needs between 1 and {d} rows \
             (the data has {d} features)",
            args.atoms
        )));
    }

    let hp = Hyperparams {
        atoms: args.atoms,
        lambda: args.lambda,
        mu: args.mu,
        max_outer: args.iters,
        rel_tol: args.tol,
        seed: args.seed,
        threshold_convention: args.threshold_convention,
        ..Hyperparams::default()
    };
    let q = LabelMatrix::from_indices(&labels, classes)?;
    log::info!(
        "training: {} samples x {d} features, {classes} classes, {} atoms",
        x.sample_count(),
        args.atoms
    );
    let (model, report) = train_lctl(&x, &q, &hp)?;
    save_model(&model, &args.out)?;

    let flags = json!({
        "inputs": inputs,
        "train_idx": args.train_idx,
        "atoms": args.atoms,
        "lambda": args.lambda,
        "mu": args.mu,
        "iters": args.iters,
        "tol": args.tol,
        "seed": args.seed,
        "threshold_convention": args.threshold_convention,
        "out": args.out,
    });
    let manifest = RunManifest::new("train", flags, Some(args.seed), &inputs, started)?;
    let manifest_path = manifest.write_for(&args.out)?;

    let final_objective = model
        .objective_trace()
        .last()
        .map(|v| v.to_string())
        .unwrap_or_else(|| "(none)".into());
    println!(
        "trained {} atoms x {} features, {} classes on {} samples",
        model.atom_count(),
        model.feature_count(),
        model.class_count(),
        x.sample_count()
    );
    println!(
        "outer iterations: {} (converged: {}), final objective: {}",
        report.outer_iterations, report.converged, final_objective
    );
    println!("model written to {}", args.out.display());
    println!("manifest written to {}", manifest_path.display());
    Ok(())
}
