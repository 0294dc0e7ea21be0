//! Synthetic dataset with a planted transform and block-sparse codes.
//!
//! Construction: draw a random orthonormal `d x d` transform `T*`, give
//! each class a sparse template supported on its own block of `d / c`
//! consecutive coefficients (values drawn from `[1, 2]` with random
//! signs), then emit samples `x = T*^T (template + jitter)` plus optional
//! Gaussian feature noise. Because the supports are disjoint, classes are
//! separated exactly in the noiseless case.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::{DataMatrix, LabelMatrix};

/// A generated dataset together with the transform that produced it.
#[derive(Debug, Clone)]
pub struct SynthDataset {
    /// `d x N` features, samples grouped by class in label order.
    pub features: DataMatrix,
    /// One-hot labels aligned with the feature columns.
    pub labels: LabelMatrix,
    /// The planted orthonormal `d x d` transform.
    pub planted_transform: DMatrix<f64>,
}

/// Generates a block-sparse classification dataset.
///
/// `d` features, `c` classes (`c >= 2`, `d >= c`), `n_per_class` samples
/// per class, Gaussian feature noise with standard deviation
/// `noise_sigma >= 0`. The same seed always produces bit-identical data.
pub fn synth_dataset(
    d: usize,
    c: usize,
    n_per_class: usize,
    noise_sigma: f64,
    seed: u64,
) -> Result<SynthDataset> {
    if c < 2 {
        return Err(Error::InvalidArgs(format!(
            "need at least 2 classes, got {c}"
        )));
    }
    if d < c {
        return Err(Error::InvalidArgs(format!(
            "need d >= c so each class gets a coefficient block, got d = {d}, c = {c}"
        )));
    }
    if n_per_class == 0 {
        return Err(Error::InvalidArgs("n_per_class must be >= 1".into()));
    }
    if !(noise_sigma >= 0.0 && noise_sigma.is_finite()) {
        return Err(Error::InvalidArgs(format!(
            "noise_sigma must be finite and >= 0, got {noise_sigma}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    // planted orthonormal transform
    let gauss = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(&mut rng));
    let planted = gauss.qr().q();

    // per-class sparse templates on disjoint blocks
    let block = d / c;
    let mut templates = vec![vec![0.0f64; d]; c];
    for (class, template) in templates.iter_mut().enumerate() {
        let start = class * block;
        for slot in template.iter_mut().skip(start).take(block) {
            let magnitude = rng.gen_range(1.0..2.0);
            let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
            *slot = sign * magnitude;
        }
    }

    let n = c * n_per_class;
    let mut features = DMatrix::zeros(d, n);
    let mut labels = Vec::with_capacity(n);
    let t_star_t = planted.transpose();
    for (class, template) in templates.iter().enumerate() {
        let start = class * block;
        for k in 0..n_per_class {
            let j = class * n_per_class + k;
            let mut code = template.clone();
            for slot in code.iter_mut().skip(start).take(block) {
                *slot += rng.gen_range(-0.2..0.2);
            }
            let code = nalgebra::DVector::from_vec(code);
            let mut x: nalgebra::DVector<f64> = &t_star_t * code;
            if noise_sigma > 0.0 {
                for v in x.iter_mut() {
                    let g: f64 = StandardNormal.sample(&mut rng);
                    *v += noise_sigma * g;
                }
            }
            features.set_column(j, &x);
            labels.push(class);
        }
    }
    Ok(SynthDataset {
        features: DataMatrix::new(features)?,
        labels: LabelMatrix::from_indices(&labels, c)?,
        planted_transform: planted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn shapes_and_label_layout() {
        let data = synth_dataset(12, 3, 5, 0.0, 1).unwrap();
        assert_eq!(data.features.feature_count(), 12);
        assert_eq!(data.features.sample_count(), 15);
        assert_eq!(data.labels.class_count(), 3);
        assert_eq!(data.labels.class_histogram(), vec![5, 5, 5]);
        assert_eq!(
            data.labels.class_indices(),
            vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 2, 2, 2, 2, 2]
        );
    }

    #[test]
    fn planted_transform_is_orthonormal() {
        let data = synth_dataset(10, 2, 3, 0.1, 5).unwrap();
        let t = &data.planted_transform;
        let eye = DMatrix::<f64>::identity(10, 10);
        assert_abs_diff_eq!((t * t.transpose() - eye).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn noiseless_codes_live_on_class_blocks() {
        let d = 12;
        let c = 3;
        let block = d / c;
        let data = synth_dataset(d, c, 4, 0.0, 7).unwrap();
        let codes = &data.planted_transform * data.features.values();
        for (j, &label) in data.labels.class_indices().iter().enumerate() {
            for i in 0..d {
                let in_block = i >= label * block && i < (label + 1) * block;
                let v = codes[(i, j)];
                if in_block {
                    // template magnitude 1..2 with jitter up to 0.2
                    assert!(v.abs() >= 0.8 && v.abs() <= 2.2, "({i},{j}) = {v}");
                } else {
                    assert_abs_diff_eq!(v, 0.0, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn same_seed_is_bit_identical_different_seed_is_not() {
        let a = synth_dataset(8, 2, 6, 0.05, 42).unwrap();
        let b = synth_dataset(8, 2, 6, 0.05, 42).unwrap();
        assert_eq!(a.features.values(), b.features.values());
        assert_eq!(a.planted_transform, b.planted_transform);
        let c = synth_dataset(8, 2, 6, 0.05, 43).unwrap();
        assert_ne!(a.features.values(), c.features.values());
    }

    #[test]
    fn noise_perturbs_features() {
        let clean = synth_dataset(8, 2, 6, 0.0, 9).unwrap();
        let noisy = synth_dataset(8, 2, 6, 0.05, 9).unwrap();
        let diff = (clean.features.values() - noisy.features.values()).norm();
        assert!(diff > 0.0);
        // small sigma stays small relative to the signal
        assert!(diff < clean.features.values().norm());
    }

    #[test]
    fn argument_validation() {
        assert!(synth_dataset(4, 1, 5, 0.0, 0).is_err());
        assert!(synth_dataset(3, 4, 5, 0.0, 0).is_err());
        assert!(synth_dataset(8, 2, 0, 0.0, 0).is_err());
        assert!(synth_dataset(8, 2, 5, -0.1, 0).is_err());
        assert!(synth_dataset(8, 2, 5, f64::NAN, 0).is_err());
    }
}
