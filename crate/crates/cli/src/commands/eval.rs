//! `lctl eval` — score predictions against ground truth.
//!
//! Two modes:
//! * file mode: `--pred` (from `lctl predict`) against `--truth` (1-based
//!   label CSV), compared line by line;
//! * model mode: `--model` plus a dataset, optionally restricted to
//!   `--test-idx`, predicting internally; `--train-idx` adds the per-class
//!   training counts to the report.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use lctl::classifier::predict_batch;
use lctl::data::csv::{load_indices, load_labels_csv};
use lctl::data::model_file::load_model;
use lctl::metrics::{confusion_matrix, MetricsReport};
use lctl::Error;

use crate::commands::CliError;
use crate::data_args::DataArgs;
use crate::manifest::RunManifest;

#[derive(Debug, clap::Args)]
pub struct EvalArgs {
    /// Predictions CSV from `lctl predict` (file mode; needs --truth)
    #[arg(long, value_name = "FILE")]
    pub pred: Option<PathBuf>,

    /// Truth labels CSV, 1-based, aligned line-for-line with --pred
    #[arg(long, value_name = "FILE")]
    pub truth: Option<PathBuf>,

    /// Trained model (model mode; needs a dataset)
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,

    #[command(flatten)]
    pub data: DataArgs,

    /// Evaluate only the 0-based sample indices in this file
    #[arg(long, value_name = "FILE")]
    pub test_idx: Option<PathBuf>,

    /// Adds per-class training counts (from these 0-based indices) to the
    /// report
    #[arg(long, value_name = "FILE")]
    pub train_idx: Option<PathBuf>,

    /// Use this sparsity weight instead of the model's at encode time
    #[arg(long, value_name = "MU")]
    pub mu_override: Option<f64>,

    /// Write the report as JSON here (the table always prints to stdout)
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

pub fn run(args: EvalArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let file_mode = args.pred.is_some() || args.truth.is_some();
    let model_mode = args.model.is_some();
    if file_mode == model_mode {
        return Err(CliError::Usage(
            "pass either --pred with --truth (file mode) or --model with a dataset \
             (model mode)"
                .into(),
        ));
    }

    let (report, inputs, flags) = if file_mode {
        eval_files(&args)?
    } else {
        eval_model(&args)?
    };

    print!("{}", report.to_table());

    if let Some(out) = &args.out {
        let text = serde_json::to_string_pretty(&report).expect("report structs always serialize");
        fs::write(out, text + "\n").map_err(Error::from)?;
        let manifest = RunManifest::new("eval", flags, None, &inputs, started)?;
        let manifest_path = manifest.write_for(out)?;
        println!("report written to {}", out.display());
        println!("manifest written to {}", manifest_path.display());
    }
    Ok(())
}

/// Reads the 1-based predicted class from each `index,label,score...` line
/// and returns it 0-based.
fn load_predicted_labels(path: &PathBuf) -> Result<Vec<usize>, CliError> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let label_field = line.split(',').nth(1).ok_or(Error::Parse {
            line: idx + 1,
            message: "expected at least two comma-separated fields (index, label)".into(),
        })?;
        let label: u64 = label_field.trim().parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("expected an integer class label, found {label_field:?}"),
        })?;
        if label == 0 {
            return Err(CliError::Core(Error::InvalidLabel(format!(
                "line {}: predicted labels are 1-based; 0 is reserved for unlabeled",
                idx + 1
            ))));
        }
        labels.push((label - 1) as usize);
    }
    if labels.is_empty() {
        return Err(CliError::Core(Error::EmptyFile(path.display().to_string())));
    }
    Ok(labels)
}

fn eval_files(
    args: &EvalArgs,
) -> Result<(MetricsReport, Vec<PathBuf>, serde_json::Value), CliError> {
    let (pred_path, truth_path) = match (&args.pred, &args.truth) {
        (Some(p), Some(t)) => (p, t),
        _ => {
            return Err(CliError::Usage(
                "file mode needs both --pred and --truth".into(),
            ))
        }
    };
    if args.test_idx.is_some() || args.train_idx.is_some() || args.mu_override.is_some() {
        return Err(CliError::Usage(
            "--test-idx, --train-idx, and --mu-override apply only to model mode".into(),
        ));
    }
    let y_pred = load_predicted_labels(pred_path)?;
    let y_true = load_labels_csv(truth_path)?;
    if y_pred.len() != y_true.len() {
        return Err(CliError::Core(Error::LengthMismatch(format!(
            "{} predictions vs {} truth labels",
            y_pred.len(),
            y_true.len()
        ))));
    }
    let classes = y_pred.iter().chain(y_true.iter()).max().expect("non-empty") + 1;
    let cm = confusion_matrix(&y_true, &y_pred, classes)?;
    let report = MetricsReport::from_confusion(&cm, None)?;
    let flags = json!({
        "pred": pred_path,
        "truth": truth_path,
        "out": args.out,
    });
    Ok((report, vec![pred_path.clone(), truth_path.clone()], flags))
}

fn eval_model(
    args: &EvalArgs,
) -> Result<(MetricsReport, Vec<PathBuf>, serde_json::Value), CliError> {
    let model_path = args.model.as_ref().expect("model mode");
    let mut model = load_model(model_path)?;
    if let Some(mu) = args.mu_override {
        model = model.with_mu(mu)?;
    }
    let loaded = args.data.load(true)?;
    let all_labels = loaded.labels.expect("labels required by load(true)");
    let classes = model.class_count();
    if let Some(&bad) = all_labels.iter().find(|&&l| l >= classes) {
        return Err(CliError::Core(Error::InvalidLabel(format!(
            "label {} is outside the model's {} classes",
            bad + 1,
            classes
        ))));
    }

    let mut inputs = vec![model_path.clone()];
    inputs.extend(loaded.inputs.iter().cloned());

    let (x_test, y_true) = match &args.test_idx {
        Some(path) => {
            inputs.push(path.clone());
            let indices = load_indices(path)?;
            let x = loaded.features.select_samples(&indices)?;
            let y: Vec<usize> = indices.iter().map(|&i| all_labels[i]).collect();
            (x, y)
        }
        None => (loaded.features.clone(), all_labels.clone()),
    };

    let train_counts: Option<Vec<u64>> = match &args.train_idx {
        Some(path) => {
            inputs.push(path.clone());
            let indices = load_indices(path)?;
            if let Some(&bad) = indices.iter().find(|&&i| i >= all_labels.len()) {
                return Err(CliError::Core(Error::LengthMismatch(format!(
                    "train index {bad} is outside the dataset ({} samples)",
                    all_labels.len()
                ))));
            }
            let mut counts = vec![0u64; classes];
            for &i in &indices {
                counts[all_labels[i]] += 1;
            }
            Some(counts)
        }
        None => None,
    };

    let predictions = predict_batch(&model, &x_test)?;
    let y_pred: Vec<usize> = predictions.iter().map(|p| p.class_index).collect();
    let cm = confusion_matrix(&y_true, &y_pred, classes)?;
    let report = MetricsReport::from_confusion(&cm, train_counts.as_deref())?;
    let flags = json!({
        "model": model_path,
        "inputs": loaded.inputs,
        "test_idx": args.test_idx,
        "train_idx": args.train_idx,
        "mu_override": args.mu_override,
        "out": args.out,
    });
    Ok((report, inputs, flags))
}
