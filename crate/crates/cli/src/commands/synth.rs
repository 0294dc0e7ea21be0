//! `lctl synth` — generate a planted synthetic dataset as CSV files.

use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use lctl::data::csv::{save_labels_csv, save_matrix_csv};
use lctl::data::synth::synth_dataset;

use crate::commands::CliError;
use crate::manifest::{path_with_suffix, RunManifest};

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    /// Feature dimensionality
    #[arg(long, default_value_t = 20)]
    pub dim: usize,

    /// Number of classes (at least 2, at most --dim)
    #[arg(long, default_value_t = 4)]
    pub classes: usize,

    /// Samples per class
    #[arg(long, default_value_t = 100)]
    pub per_class: usize,

    /// Standard deviation of the additive feature noise
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,

    /// Generator seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Writes <prefix>.features.csv and <prefix>.labels.csv
    #[arg(long, value_name = "PREFIX")]
    pub out_prefix: PathBuf,
}

pub fn run(args: SynthArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let data = synth_dataset(
        args.dim,
        args.classes,
        args.per_class,
        args.noise,
        args.seed,
    )?;

    let features_path = path_with_suffix(&args.out_prefix, ".features.csv");
    let labels_path = path_with_suffix(&args.out_prefix, ".labels.csv");
    save_matrix_csv(&data.features, &features_path)?;
    save_labels_csv(&data.labels.class_indices(), &labels_path)?;

    let flags = json!({
        "dim": args.dim,
        "classes": args.classes,
        "per_class": args.per_class,
        "noise": args.noise,
        "seed": args.seed,
        "out_prefix": args.out_prefix,
    });
    let manifest = RunManifest::new("synth", flags, Some(args.seed), &[], started)?;
    // Command-specific name: `synth` and `split` commonly share a prefix,
    // and neither may clobber the other's provenance record.
    let manifest_path = manifest.write_for(&path_with_suffix(&args.out_prefix, ".synth"))?;

    println!(
        "generated {} samples ({} classes x {}, {} features, noise {})",
        args.classes * args.per_class,
        args.classes,
        args.per_class,
        args.dim,
        args.noise
    );
    println!("features written to {}", features_path.display());
    println!("labels written to {}", labels_path.display());
    println!("manifest written to {}", manifest_path.display());
    Ok(())
}
