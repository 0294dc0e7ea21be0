//! Model serialization.
//!
//! Models are stored as a single JSON document. Matrices are flattened
//! row-major; floats are emitted with the shortest representation that
//! parses back to the same bits, so save/load round-trips exactly and two
//! identical models produce byte-identical files. Nothing time- or
//! host-dependent is stored.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Hyperparams, LctlModel, TransformModel};

/// Version written by this build; the loader accepts only this value.
pub const MODEL_FORMAT_VERSION: u64 = 1;

/// Name of the pseudo-random generator family used for all seeding.
pub const PRNG_NAME: &str = "chacha20";

#[derive(Debug, Serialize, Deserialize)]
struct Dims {
    atoms: usize,
    features: usize,
    classes: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u64,
    prng: String,
    dims: Dims,
    hyperparams: Hyperparams,
    seed: u64,
    class_names: Vec<String>,
    objective_trace: Vec<f64>,
    /// row-major `atoms x features`
    transform: Vec<f64>,
    /// row-major `classes x atoms`
    classifier: Vec<f64>,
}

fn flatten_row_major(m: &DMatrix<f64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

/// Writes `model` to `path` as pretty-printed JSON with a trailing
/// newline.
pub fn save_model(model: &LctlModel, path: impl AsRef<Path>) -> Result<()> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        prng: PRNG_NAME.to_string(),
        dims: Dims {
            atoms: model.atom_count(),
            features: model.feature_count(),
            classes: model.class_count(),
        },
        hyperparams: model.hyperparams().clone(),
        seed: model.seed(),
        class_names: model.class_names().to_vec(),
        objective_trace: model.objective_trace().to_vec(),
        transform: flatten_row_major(model.transform().matrix()),
        classifier: flatten_row_major(model.classifier()),
    };
    let mut text =
        serde_json::to_string_pretty(&file).map_err(|e| Error::SchemaInvalid(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Reads a model written by [`save_model`], re-validating every invariant
/// on the way in.
pub fn load_model(path: impl AsRef<Path>) -> Result<LctlModel> {
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::SchemaInvalid(e.to_string()))?;
    let version = value
        .get("format_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| Error::SchemaInvalid("missing format_version".into()))?;
    if version != MODEL_FORMAT_VERSION {
        return Err(Error::FormatVersionUnsupported(version));
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| Error::SchemaInvalid(e.to_string()))?;
    if file.prng != PRNG_NAME {
        return Err(Error::SchemaInvalid(format!(
            "unsupported prng {:?}, expected {PRNG_NAME:?}",
            file.prng
        )));
    }
    let Dims {
        atoms,
        features,
        classes,
    } = file.dims;
    if file.transform.len() != atoms * features {
        return Err(Error::SchemaInvalid(format!(
            "transform has {} entries, dims declare {}",
            file.transform.len(),
            atoms * features
        )));
    }
    if file.classifier.len() != classes * atoms {
        return Err(Error::SchemaInvalid(format!(
            "classifier has {} entries, dims declare {}",
            file.classifier.len(),
            classes * atoms
        )));
    }
    if file.hyperparams.atoms != atoms {
        return Err(Error::SchemaInvalid(format!(
            "hyperparams declare {} atoms but dims say {}",
            file.hyperparams.atoms, atoms
        )));
    }
    if file.hyperparams.seed != file.seed {
        return Err(Error::SchemaInvalid(
            "seed field disagrees with hyperparams".into(),
        ));
    }
    let transform_matrix = DMatrix::from_row_slice(atoms, features, &file.transform);
    let classifier = DMatrix::from_row_slice(classes, atoms, &file.classifier);
    // the type constructors re-check finiteness and shape consistency
    let transform = TransformModel::new(transform_matrix, file.hyperparams)
        .map_err(|e| Error::SchemaInvalid(e.to_string()))?;
    LctlModel::new(
        transform,
        classifier,
        file.class_names,
        file.objective_trace,
        file.seed,
    )
    .map_err(|e| Error::SchemaInvalid(e.to_string()))
}
