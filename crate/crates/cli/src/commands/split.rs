//! `lctl split` — draw a per-class train/test split and write index files.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use serde_json::json;

use lctl::data::csv::{load_labels_csv, save_indices};
use lctl::data::cube::load_gt_labels;
use lctl::data::split::{split, SplitMode, SplitSpec};
use lctl::Error;

use crate::commands::CliError;
use crate::manifest::{path_with_suffix, RunManifest};

#[derive(Debug, clap::Args)]
pub struct SplitArgs {
    /// Label CSV, 1-based, one per line
    #[arg(long, value_name = "FILE")]
    pub labels: Option<PathBuf>,

    /// Ground-truth grid CSV (0 = unlabeled); splits the labeled pixels in
    /// row-major order, matching cube-mode feature columns
    #[arg(long, value_name = "FILE")]
    pub gt: Option<PathBuf>,

    /// Per-class training fraction in (0, 1)
    #[arg(long, value_name = "F")]
    pub fraction: Option<f64>,

    /// Minimum training samples per class (used with --fraction)
    #[arg(long, default_value_t = 1, value_name = "N")]
    pub floor: usize,

    /// File with one training count per class (1-based class order), an
    /// alternative to --fraction
    #[arg(long, value_name = "FILE")]
    pub counts_file: Option<PathBuf>,

    /// Shuffle seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Writes <prefix>.train.idx and <prefix>.test.idx (0-based indices)
    #[arg(long, value_name = "PREFIX")]
    pub out_prefix: PathBuf,
}

fn load_counts(path: &PathBuf) -> Result<Vec<usize>, CliError> {
    let text = fs::read_to_string(path).map_err(Error::from)?;
    let mut counts = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let count: usize = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("expected a training count, found {line:?}"),
        })?;
        counts.push(count);
    }
    if counts.is_empty() {
        return Err(CliError::Core(Error::EmptyFile(path.display().to_string())));
    }
    Ok(counts)
}

pub fn run(args: SplitArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let (labels, label_input) = match (&args.labels, &args.gt) {
        (Some(path), None) => (load_labels_csv(path)?, path.clone()),
        (None, Some(path)) => (load_gt_labels(path)?, path.clone()),
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --labels (CSV) or --gt (ground-truth grid)".into(),
            ))
        }
    };

    let mut inputs = vec![label_input];
    let mode = match (&args.fraction, &args.counts_file) {
        (Some(fraction), None) => SplitMode::Fraction {
            fraction: *fraction,
            floor: args.floor,
        },
        (None, Some(path)) => {
            inputs.push(path.clone());
            SplitMode::PerClassCounts {
                counts: load_counts(path)?,
            }
        }
        _ => {
            return Err(CliError::Usage(
                "pass exactly one of --fraction or --counts-file".into(),
            ))
        }
    };

    let spec = SplitSpec {
        mode,
        seed: args.seed,
    };
    let (train, test) = split(&labels, &spec)?;

    let train_path = path_with_suffix(&args.out_prefix, ".train.idx");
    let test_path = path_with_suffix(&args.out_prefix, ".test.idx");
    save_indices(&train, &train_path)?;
    save_indices(&test, &test_path)?;

    let flags = json!({
        "labels": args.labels,
        "gt": args.gt,
        "fraction": args.fraction,
        "floor": args.floor,
        "counts_file": args.counts_file,
        "seed": args.seed,
        "out_prefix": args.out_prefix,
    });
    let manifest = RunManifest::new("split", flags, Some(args.seed), &inputs, started)?;
    // Command-specific name: `synth` and `split` commonly share a prefix,
    // and neither may clobber the other's provenance record.
    let manifest_path = manifest.write_for(&path_with_suffix(&args.out_prefix, ".split"))?;

    println!(
        "split {} samples into {} train / {} test",
        labels.len(),
        train.len(),
        test.len()
    );
    println!("train indices written to {}", train_path.display());
    println!("test indices written to {}", test_path.display());
    println!("manifest written to {}", manifest_path.display());
    Ok(())
}
