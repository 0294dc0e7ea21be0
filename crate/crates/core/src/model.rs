//! Core data types: validated matrices, hyperparameters, and trained models.
//!
//! Construction is the validation boundary: every type here checks its
//! invariants once, in its constructor, and is immutable afterwards. Code
//! that receives one of these types by reference may rely on the invariants
//! without re-checking them. Samples are always stored as columns.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Feature matrix with one sample per column (`d x N`).
///
/// Invariants: at least one row and one column, every entry finite.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    values: DMatrix<f64>,
}

impl DataMatrix {
    /// Wraps a dense matrix, rejecting empty shapes and non-finite entries.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "data matrix must be non-empty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("data matrix".into()));
        }
        Ok(Self { values })
    }

    /// Builds a `d x N` matrix from `N` sample slices of length `d`.
    pub fn from_samples(samples: &[Vec<f64>]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::DimensionMismatch(
                "data matrix must contain at least one sample".into(),
            ));
        }
        let d = samples[0].len();
        for (i, s) in samples.iter().enumerate() {
            if s.len() != d {
                return Err(Error::RaggedRows {
                    line: i + 1,
                    expected: d,
                    found: s.len(),
                });
            }
        }
        let values = DMatrix::from_fn(d, samples.len(), |i, j| samples[j][i]);
        Self::new(values)
    }

    /// Number of features `d` (rows).
    pub fn feature_count(&self) -> usize {
        self.values.nrows()
    }

    /// Number of samples `N` (columns).
    pub fn sample_count(&self) -> usize {
        self.values.ncols()
    }

    /// Borrow the underlying `d x N` matrix.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Copy of sample `j` as an owned column vector.
    pub fn sample(&self, j: usize) -> DVector<f64> {
        self.values.column(j).into_owned()
    }

    /// New matrix keeping only the listed sample columns, in the given order.
    pub fn select_samples(&self, indices: &[usize]) -> Result<Self> {
        for &j in indices {
            if j >= self.sample_count() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    classes: self.sample_count(),
                });
            }
        }
        if indices.is_empty() {
            return Err(Error::InvalidArgs("sample selection is empty".into()));
        }
        let values = DMatrix::from_fn(self.feature_count(), indices.len(), |i, j| {
            self.values[(i, indices[j])]
        });
        Self::new(values)
    }
}

/// One-hot label matrix with one sample per column (`c x N`).
///
/// Invariants: at least two classes, entries are exactly 0.0 or 1.0, and
/// every column contains exactly one 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelMatrix {
    values: DMatrix<f64>,
}

impl LabelMatrix {
    /// Wraps a dense matrix, verifying the one-hot structure.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() < 2 || values.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "label matrix needs >= 2 classes and >= 1 sample, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        for j in 0..values.ncols() {
            let mut ones = 0usize;
            for i in 0..values.nrows() {
                let v = values[(i, j)];
                if v == 1.0 {
                    ones += 1;
                } else if v != 0.0 {
                    return Err(Error::InvalidLabel(format!(
                        "entry ({i}, {j}) is {v}, expected 0 or 1"
                    )));
                }
            }
            if ones != 1 {
                return Err(Error::InvalidLabel(format!(
                    "column {j} has {ones} ones, expected exactly one"
                )));
            }
        }
        Ok(Self { values })
    }

    /// Builds the one-hot matrix from 0-based class indices.
    pub fn from_indices(labels: &[usize], classes: usize) -> Result<Self> {
        if classes < 2 {
            return Err(Error::InvalidArgs(format!(
                "need at least 2 classes, got {classes}"
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidArgs("label list is empty".into()));
        }
        let mut values = DMatrix::zeros(classes, labels.len());
        for (j, &label) in labels.iter().enumerate() {
            if label >= classes {
                return Err(Error::IndexOutOfRange {
                    index: label,
                    classes,
                });
            }
            values[(label, j)] = 1.0;
        }
        Self::new(values)
    }

    /// Number of classes `c` (rows).
    pub fn class_count(&self) -> usize {
        self.values.nrows()
    }

    /// Number of samples `N` (columns).
    pub fn sample_count(&self) -> usize {
        self.values.ncols()
    }

    /// Borrow the underlying `c x N` matrix.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// 0-based class index of each sample.
    pub fn class_indices(&self) -> Vec<usize> {
        (0..self.sample_count())
            .map(|j| {
                // invariant: each column has exactly one 1
                (0..self.class_count())
                    .find(|&i| self.values[(i, j)] == 1.0)
                    .expect("one-hot column")
            })
            .collect()
    }

    /// Number of samples per class.
    pub fn class_histogram(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_count()];
        for label in self.class_indices() {
            counts[label] += 1;
        }
        counts
    }

    /// New matrix keeping only the listed sample columns, in the given order.
    pub fn select_samples(&self, indices: &[usize]) -> Result<Self> {
        for &j in indices {
            if j >= self.sample_count() {
                return Err(Error::IndexOutOfRange {
                    index: j,
                    classes: self.sample_count(),
                });
            }
        }
        if indices.is_empty() {
            return Err(Error::InvalidArgs("sample selection is empty".into()));
        }
        let values = DMatrix::from_fn(self.class_count(), indices.len(), |i, j| {
            self.values[(i, indices[j])]
        });
        Self::new(values)
    }
}

/// Sparse coefficient matrix with one code per column (`p x N`).
///
/// Invariants: non-empty, every entry finite.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    values: DMatrix<f64>,
}

impl CoefficientMatrix {
    /// Wraps a dense matrix, rejecting empty shapes and non-finite entries.
    pub fn new(values: DMatrix<f64>) -> Result<Self> {
        if values.nrows() == 0 || values.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "coefficient matrix must be non-empty, got {}x{}",
                values.nrows(),
                values.ncols()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("coefficient matrix".into()));
        }
        Ok(Self { values })
    }

    /// Number of transform atoms `p` (rows).
    pub fn atom_count(&self) -> usize {
        self.values.nrows()
    }

    /// Number of samples `N` (columns).
    pub fn sample_count(&self) -> usize {
        self.values.ncols()
    }

    /// Borrow the underlying `p x N` matrix.
    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// Fraction of entries that are exactly zero.
    pub fn sparsity(&self) -> f64 {
        let zeros = self.values.iter().filter(|v| **v == 0.0).count();
        zeros as f64 / (self.values.len() as f64)
    }
}

/// How the l1 penalty weight `mu` maps to the elementwise shrinkage
/// threshold used by the coefficient updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdConvention {
    /// Threshold `mu / 2`: the update is the exact proximal minimizer of
    /// `|y - z|^2 + mu * |z|_1`.
    Exact,
    /// Threshold `mu`: the shrinkage step applies `mu` directly, which
    /// minimizes the objective with the l1 weight doubled to `2 * mu`.
    Paper,
}

impl ThresholdConvention {
    /// Shrinkage threshold for a given l1 weight.
    pub fn threshold(self, mu: f64) -> f64 {
        match self {
            ThresholdConvention::Exact => mu / 2.0,
            ThresholdConvention::Paper => mu,
        }
    }

    /// The l1 weight actually minimized by a shrinkage with
    /// [`Self::threshold`]; equals `mu` under `Exact` and `2 * mu` under
    /// `Paper`. Objective traces use this weight so that descent holds
    /// under either convention.
    pub fn effective_l1_weight(self, mu: f64) -> f64 {
        2.0 * self.threshold(mu)
    }
}

impl std::str::FromStr for ThresholdConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ThresholdConvention::Exact),
            "paper" => Ok(ThresholdConvention::Paper),
            other => Err(Error::InvalidArgs(format!(
                "unknown threshold convention {other:?}, expected \"exact\" or \"paper\""
            ))),
        }
    }
}

impl std::fmt::Display for ThresholdConvention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ThresholdConvention::Exact => f.write_str("exact"),
            ThresholdConvention::Paper => f.write_str("paper"),
        }
    }
}

/// Training hyperparameters.
///
/// `max_outer = 0` is allowed and means "return the initialization"
/// (useful as a smoke mode).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hyperparams {
    /// Number of transform atoms `p` (rows of `T`).
    pub atoms: usize,
    /// Weight of the Frobenius + log-det transform regularizer.
    pub lambda: f64,
    /// Weight of the l1 sparsity penalty.
    pub mu: f64,
    /// Maximum number of outer alternating iterations.
    pub max_outer: usize,
    /// Relative objective-change tolerance that stops the outer loop.
    pub rel_tol: f64,
    /// Iteration cap for the inner coefficient solver.
    pub ista_max_iters: usize,
    /// Relative-change tolerance for the inner coefficient solver.
    pub ista_tol: f64,
    /// Seed for all pseudo-randomness (initial transform).
    pub seed: u64,
    /// Mapping from `mu` to the shrinkage threshold.
    pub threshold_convention: ThresholdConvention,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            atoms: 40,
            lambda: 0.1,
            mu: 0.05,
            max_outer: 50,
            rel_tol: 1e-6,
            ista_max_iters: 300,
            ista_tol: 1e-8,
            seed: 0,
            threshold_convention: ThresholdConvention::Exact,
        }
    }
}

impl Hyperparams {
    /// Checks every field range; `Ok(())` iff the parameters are usable.
    pub fn validate(&self) -> Result<()> {
        if self.atoms == 0 {
            return Err(Error::InvalidArgs("atoms must be >= 1".into()));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::InvalidArgs(format!(
                "lambda must be finite and > 0, got {}",
                self.lambda
            )));
        }
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidArgs(format!(
                "mu must be finite and > 0, got {}",
                self.mu
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidArgs(format!(
                "rel_tol must be finite and > 0, got {}",
                self.rel_tol
            )));
        }
        if self.ista_max_iters == 0 {
            return Err(Error::InvalidArgs("ista_max_iters must be >= 1".into()));
        }
        if !(self.ista_tol > 0.0 && self.ista_tol.is_finite()) {
            return Err(Error::InvalidArgs(format!(
                "ista_tol must be finite and > 0, got {}",
                self.ista_tol
            )));
        }
        Ok(())
    }

    /// Shrinkage threshold implied by `mu` and the convention.
    pub fn shrink_threshold(&self) -> f64 {
        self.threshold_convention.threshold(self.mu)
    }

    /// l1 weight used when evaluating objectives on traces; see
    /// [`ThresholdConvention::effective_l1_weight`].
    pub fn effective_l1_weight(&self) -> f64 {
        self.threshold_convention.effective_l1_weight(self.mu)
    }
}

/// A learned sparsifying transform together with the hyperparameters that
/// produced it.
///
/// Invariants: `matrix` is non-empty, finite, has no more rows than columns
/// (`p <= d`), and `hyperparams.atoms` equals its row count.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformModel {
    matrix: DMatrix<f64>,
    hyperparams: Hyperparams,
}

impl TransformModel {
    /// Wraps a `p x d` transform, checking shape/finiteness consistency.
    pub fn new(matrix: DMatrix<f64>, hyperparams: Hyperparams) -> Result<Self> {
        hyperparams.validate()?;
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::DimensionMismatch(
                "transform must be non-empty".into(),
            ));
        }
        if matrix.nrows() > matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "transform must have atoms <= features, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if hyperparams.atoms != matrix.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "hyperparams declare {} atoms but transform has {} rows",
                hyperparams.atoms,
                matrix.nrows()
            )));
        }
        if !matrix.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("transform matrix".into()));
        }
        Ok(Self {
            matrix,
            hyperparams,
        })
    }

    /// Borrow the `p x d` transform matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Training hyperparameters attached to this transform.
    pub fn hyperparams(&self) -> &Hyperparams {
        &self.hyperparams
    }

    /// Number of atoms `p`.
    pub fn atom_count(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of input features `d`.
    pub fn feature_count(&self) -> usize {
        self.matrix.ncols()
    }
}

/// A full label-consistent model: transform, linear classifier map, class
/// names, and the objective trace recorded while training.
#[derive(Debug, Clone, PartialEq)]
pub struct LctlModel {
    transform: TransformModel,
    classifier: DMatrix<f64>,
    class_names: Vec<String>,
    objective_trace: Vec<f64>,
    seed: u64,
}

impl LctlModel {
    /// Assembles a model, checking cross-component consistency.
    pub fn new(
        transform: TransformModel,
        classifier: DMatrix<f64>,
        class_names: Vec<String>,
        objective_trace: Vec<f64>,
        seed: u64,
    ) -> Result<Self> {
        if classifier.ncols() != transform.atom_count() {
            return Err(Error::DimensionMismatch(format!(
                "classifier has {} columns but transform has {} atoms",
                classifier.ncols(),
                transform.atom_count()
            )));
        }
        if classifier.nrows() < 2 {
            return Err(Error::DimensionMismatch(format!(
                "classifier needs >= 2 classes, got {}",
                classifier.nrows()
            )));
        }
        if class_names.len() != classifier.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "{} class names for {} classifier rows",
                class_names.len(),
                classifier.nrows()
            )));
        }
        if !classifier.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("classifier matrix".into()));
        }
        if !objective_trace.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("objective trace".into()));
        }
        Ok(Self {
            transform,
            classifier,
            class_names,
            objective_trace,
            seed,
        })
    }

    /// Borrow the transform component.
    pub fn transform(&self) -> &TransformModel {
        &self.transform
    }

    /// Borrow the `c x p` classifier map.
    pub fn classifier(&self) -> &DMatrix<f64> {
        &self.classifier
    }

    /// Class display names, one per classifier row.
    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    /// Objective value after initialization and after each outer iteration.
    pub fn objective_trace(&self) -> &[f64] {
        &self.objective_trace
    }

    /// Seed the model was trained with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of classes `c`.
    pub fn class_count(&self) -> usize {
        self.classifier.nrows()
    }

    /// Number of atoms `p`.
    pub fn atom_count(&self) -> usize {
        self.transform.atom_count()
    }

    /// Number of input features `d`.
    pub fn feature_count(&self) -> usize {
        self.transform.feature_count()
    }

    /// Training hyperparameters attached to this model.
    pub fn hyperparams(&self) -> &Hyperparams {
        self.transform.hyperparams()
    }

    /// Same model with the l1 weight `mu` replaced (affects test-time
    /// encoding only, since training is already done).
    pub fn with_mu(mut self, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgs(format!(
                "mu must be finite and > 0, got {mu}"
            )));
        }
        self.transform.hyperparams.mu = mu;
        Ok(self)
    }
}

/// Convergence report from the inner coefficient solver.
#[derive(Debug, Clone, PartialEq)]
pub struct IstaReport {
    /// Iterations actually executed.
    pub iterations_used: usize,
    /// Relative change of the iterate at the final iteration.
    pub final_rel_change: f64,
    /// Whether the relative-change tolerance was met within the cap.
    pub converged: bool,
}

/// Summary of a full training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Outer iterations executed (0 means the initialization was returned).
    pub outer_iterations: usize,
    /// Objective after initialization and after each outer iteration.
    pub objective_trace: Vec<f64>,
    /// Whether the relative-change stopping rule fired before the cap.
    pub converged: bool,
    /// Seed the run used.
    pub seed: u64,
    /// Wall-clock duration of the run in seconds.
    pub wall_time_seconds: f64,
}

/// Outcome of classifying a single sample.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    /// 0-based predicted class (lowest index wins ties).
    pub class_index: usize,
    /// Raw classifier scores, one per class.
    pub scores: Vec<f64>,
    /// The sparse code the scores were computed from.
    pub code: Vec<f64>,
}

/// Checks that a feature/label pair describes the same samples.
///
/// Both arguments already carry their own invariants from construction;
/// this verifies the cross-cutting requirement that their sample counts
/// agree.
pub fn validate_pair(x: &DataMatrix, q: &LabelMatrix) -> Result<()> {
    if x.sample_count() != q.sample_count() {
        return Err(Error::DimensionMismatch(format!(
            "feature matrix has {} samples but label matrix has {}",
            x.sample_count(),
            q.sample_count()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn data_matrix_rejects_non_finite() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, f64::NAN, 4.0]);
        assert!(matches!(DataMatrix::new(m), Err(Error::NonFinite(_))));
        let m = DMatrix::from_row_slice(1, 2, &[f64::INFINITY, 0.0]);
        assert!(matches!(DataMatrix::new(m), Err(Error::NonFinite(_))));
    }

    #[test]
    fn data_matrix_rejects_empty() {
        let m = DMatrix::<f64>::zeros(0, 3);
        assert!(matches!(
            DataMatrix::new(m),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn data_matrix_from_samples_is_column_major_by_sample() {
        let x =
            DataMatrix::from_samples(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap();
        assert_eq!(x.feature_count(), 2);
        assert_eq!(x.sample_count(), 3);
        assert_eq!(x.values()[(0, 1)], 3.0);
        assert_eq!(x.values()[(1, 2)], 6.0);
    }

    #[test]
    fn data_matrix_from_samples_rejects_ragged() {
        let err = DataMatrix::from_samples(&[vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::RaggedRows { line: 2, .. }));
    }

    #[test]
    fn select_samples_reorders_and_bounds_checks() {
        let x = DataMatrix::from_samples(&[vec![1.0], vec![2.0], vec![3.0]]).unwrap();
        let sel = x.select_samples(&[2, 0]).unwrap();
        assert_eq!(sel.values()[(0, 0)], 3.0);
        assert_eq!(sel.values()[(0, 1)], 1.0);
        assert!(matches!(
            x.select_samples(&[3]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn label_matrix_accepts_one_hot() {
        let q = LabelMatrix::from_indices(&[0, 2, 1], 3).unwrap();
        assert_eq!(q.class_count(), 3);
        assert_eq!(q.sample_count(), 3);
        assert_eq!(q.class_indices(), vec![0, 2, 1]);
        assert_eq!(q.class_histogram(), vec![1, 1, 1]);
    }

    #[test]
    fn label_matrix_rejects_two_hot_column() {
        let m = DMatrix::from_row_slice(2, 1, &[1.0, 1.0]);
        assert!(matches!(LabelMatrix::new(m), Err(Error::InvalidLabel(_))));
    }

    #[test]
    fn label_matrix_rejects_fractional_entry() {
        let m = DMatrix::from_row_slice(2, 1, &[0.5, 0.5]);
        assert!(matches!(LabelMatrix::new(m), Err(Error::InvalidLabel(_))));
    }

    #[test]
    fn label_matrix_rejects_all_zero_column() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(LabelMatrix::new(m), Err(Error::InvalidLabel(_))));
    }

    #[test]
    fn label_matrix_rejects_out_of_range_index() {
        assert!(matches!(
            LabelMatrix::from_indices(&[0, 3], 3),
            Err(Error::IndexOutOfRange {
                index: 3,
                classes: 3
            })
        ));
    }

    #[test]
    fn validate_pair_checks_sample_counts() {
        let x = DataMatrix::new(DMatrix::zeros(3, 5)).unwrap();
        let q = LabelMatrix::from_indices(&[0, 1, 0, 1], 2).unwrap();
        assert!(matches!(
            validate_pair(&x, &q),
            Err(Error::DimensionMismatch(_))
        ));
        let q5 = LabelMatrix::from_indices(&[0, 1, 0, 1, 0], 2).unwrap();
        assert!(validate_pair(&x, &q5).is_ok());
    }

    #[test]
    fn threshold_conventions_map_mu() {
        assert_eq!(ThresholdConvention::Exact.threshold(0.05), 0.025);
        assert_eq!(ThresholdConvention::Paper.threshold(0.05), 0.05);
        assert_eq!(ThresholdConvention::Exact.effective_l1_weight(0.05), 0.05);
        assert_eq!(ThresholdConvention::Paper.effective_l1_weight(0.05), 0.1);
    }

    #[test]
    fn threshold_convention_parses_and_serializes() {
        assert_eq!(
            "exact".parse::<ThresholdConvention>().unwrap(),
            ThresholdConvention::Exact
        );
        assert_eq!(
            "paper".parse::<ThresholdConvention>().unwrap(),
            ThresholdConvention::Paper
        );
        assert!("half".parse::<ThresholdConvention>().is_err());
        assert_eq!(
            serde_json::to_string(&ThresholdConvention::Paper).unwrap(),
            "\"paper\""
        );
    }

    #[test]
    fn hyperparams_default_is_valid() {
        let hp = Hyperparams::default();
        assert!(hp.validate().is_ok());
        assert_eq!(hp.atoms, 40);
        assert_eq!(hp.lambda, 0.1);
        assert_eq!(hp.mu, 0.05);
        assert_eq!(hp.shrink_threshold(), 0.025);
    }

    #[test]
    fn hyperparams_validation_rejects_bad_ranges() {
        let bad = [
            Hyperparams {
                lambda: 0.0,
                ..Hyperparams::default()
            },
            Hyperparams {
                mu: -0.1,
                ..Hyperparams::default()
            },
            Hyperparams {
                atoms: 0,
                ..Hyperparams::default()
            },
            Hyperparams {
                ista_tol: f64::NAN,
                ..Hyperparams::default()
            },
        ];
        for hp in bad {
            assert!(hp.validate().is_err(), "accepted {hp:?}");
        }
        // max_outer = 0 is a documented smoke mode, not an error.
        let smoke = Hyperparams {
            max_outer: 0,
            ..Hyperparams::default()
        };
        assert!(smoke.validate().is_ok());
    }

    #[test]
    fn transform_model_checks_consistency() {
        let hp = Hyperparams {
            atoms: 2,
            ..Hyperparams::default()
        };
        let ok = TransformModel::new(DMatrix::identity(2, 3), hp.clone());
        assert!(ok.is_ok());
        // row count must match hyperparams.atoms
        let bad = TransformModel::new(DMatrix::identity(3, 3), hp.clone());
        assert!(bad.is_err());
        // wide transforms only (p <= d)
        let hp4 = Hyperparams {
            atoms: 4,
            ..Hyperparams::default()
        };
        let bad = TransformModel::new(DMatrix::identity(4, 3), hp4);
        assert!(bad.is_err());
    }

    #[test]
    fn lctl_model_checks_cross_dims() {
        let hp = Hyperparams {
            atoms: 2,
            ..Hyperparams::default()
        };
        let t = TransformModel::new(DMatrix::identity(2, 3), hp).unwrap();
        let m_good = DMatrix::zeros(2, 2);
        let names = vec!["1".to_string(), "2".to_string()];
        assert!(LctlModel::new(t.clone(), m_good, names.clone(), vec![1.0], 7).is_ok());
        let m_bad = DMatrix::zeros(2, 3);
        assert!(LctlModel::new(t.clone(), m_bad, names.clone(), vec![], 7).is_err());
        let m_one_class = DMatrix::zeros(1, 2);
        assert!(LctlModel::new(t, m_one_class, vec!["1".into()], vec![], 7).is_err());
    }

    #[test]
    fn with_mu_overrides_encoding_weight() {
        let hp = Hyperparams {
            atoms: 2,
            ..Hyperparams::default()
        };
        let t = TransformModel::new(DMatrix::identity(2, 2), hp).unwrap();
        let names = vec!["1".to_string(), "2".to_string()];
        let model = LctlModel::new(t, DMatrix::identity(2, 2), names, vec![], 0).unwrap();
        let model = model.with_mu(0.2).unwrap();
        assert_eq!(model.hyperparams().mu, 0.2);
        assert!(model.with_mu(f64::NAN).is_err());
    }
}
