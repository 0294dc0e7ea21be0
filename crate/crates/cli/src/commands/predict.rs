//! `lctl predict` — classify samples with a saved model.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use lctl::classifier::predict_batch;
use lctl::data::model_file::load_model;
use lctl::data::ppm::render_map;

use crate::commands::CliError;
use crate::data_args::DataArgs;
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct PredictArgs {
    /// Trained model file from `lctl train`
    #[arg(long, value_name = "FILE")]
    pub model: PathBuf,

    #[command(flatten)]
    pub data: DataArgs,

    /// Output CSV: one `index,label,score...` line per sample, with the
    /// 0-based sample index and the 1-based predicted class
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,

    /// Also render the predicted classes as a PPM image (cube input only)
    #[arg(long, value_name = "FILE")]
    pub map: Option<PathBuf>,

    /// Use this sparsity weight instead of the model's at encode time
    #[arg(long, value_name = "MU")]
    pub mu_override: Option<f64>,
}

pub fn run(args: PredictArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let mut model = load_model(&args.model)?;
    if let Some(mu) = args.mu_override {
        model = model.with_mu(mu)?;
    }
    let loaded = args.data.load(false)?;
    if args.map.is_some() && loaded.coords.is_none() {
        return Err(CliError::Usage(
            "--map needs cube input: pixel coordinates come from the ground-truth grid".into(),
        ));
    }

    let predictions = predict_batch(&model, &loaded.features)?;
    let mut text = String::new();
    for (index, prediction) in predictions.iter().enumerate() {
        write!(text, "{index},{}", prediction.class_index + 1).expect("string write");
        for score in &prediction.scores {
            write!(text, ",{score}").expect("string write");
        }
        text.push('\n');
    }
    fs::write(&args.out, text).map_err(lctl::Error::from)?;

    if let Some(map_path) = &args.map {
        let classes: Vec<usize> = predictions.iter().map(|p| p.class_index).collect();
        let coords = loaded.coords.as_ref().expect("checked above");
        let dims = loaded.image_dims.expect("cube input has dims");
        render_map(&classes, coords, dims, map_path)?;
        println!("class map written to {}", map_path.display());
    }

    let mut inputs = vec![args.model.clone()];
    inputs.extend(loaded.inputs.iter().cloned());
    let flags = json!({
        "model": args.model,
        "inputs": loaded.inputs,
        "out": args.out,
        "map": args.map,
        "mu_override": args.mu_override,
    });
    let manifest = RunManifest::new("predict", flags, None, &inputs, started)?;
    let manifest_path = manifest.write_for(&args.out)?;

    println!(
        "{} predictions written to {}",
        predictions.len(),
        args.out.display()
    );
    println!("manifest written to {}", manifest_path.display());
    Ok(())
}
