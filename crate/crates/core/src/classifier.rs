//! Test-time encoding and classification.
//!
//! Inference is deliberately cheap: encode a sample with one matrix-vector
//! product and a shrink, score it with a second matrix-vector product, and
//! take the arg-max. Nothing here depends on the training set size.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::model::{DataMatrix, LctlModel, Prediction};
use crate::prox::shrink;

/// Sparse code for one test sample: `shrink(T x, thresh)`, with the
/// threshold taken from the model's `mu` and threshold convention.
pub fn encode_test(model: &LctlModel, x: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() != model.feature_count() {
        return Err(Error::DimensionMismatch(format!(
            "model expects {} features but sample has {}",
            model.feature_count(),
            x.len()
        )));
    }
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("test sample".into()));
    }
    let thresh = model.hyperparams().shrink_threshold();
    let mut z = model.transform().matrix() * x;
    z.apply(|v| *v = shrink(*v, thresh));
    Ok(z)
}

/// Raw class scores `M z` for an encoded sample.
pub fn predict_scores(model: &LctlModel, z: &DVector<f64>) -> Result<DVector<f64>> {
    if z.len() != model.atom_count() {
        return Err(Error::DimensionMismatch(format!(
            "model expects {} code entries but got {}",
            model.atom_count(),
            z.len()
        )));
    }
    if !z.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("code vector".into()));
    }
    Ok(model.classifier() * z)
}

/// Index of the largest score; the lowest index wins ties.
fn argmax(scores: &DVector<f64>) -> usize {
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

/// Classifies one sample: encode, score, arg-max.
pub fn predict_class(model: &LctlModel, x: &DVector<f64>) -> Result<Prediction> {
    let code = encode_test(model, x)?;
    let scores = predict_scores(model, &code)?;
    let class_index = argmax(&scores);
    Ok(Prediction {
        class_index,
        scores: scores.iter().copied().collect(),
        code: code.iter().copied().collect(),
    })
}

/// Classifies every column of `x`; identical to calling [`predict_class`]
/// per sample, in order.
pub fn predict_batch(model: &LctlModel, x: &DataMatrix) -> Result<Vec<Prediction>> {
    if x.feature_count() != model.feature_count() {
        return Err(Error::DimensionMismatch(format!(
            "model expects {} features but data has {}",
            model.feature_count(),
            x.feature_count()
        )));
    }
    (0..x.sample_count())
        .map(|j| predict_class(model, &x.sample(j)))
        .collect()
}
