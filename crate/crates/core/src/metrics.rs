//! Classification metrics and model-count accounting.
//!
//! Counting is integer-exact: the confusion matrix stores `u64` counts and
//! the chance-agreement term of Cohen's kappa is accumulated in `u128`
//! before any division, so the metrics are reproducible to the last bit.

use serde::Serialize;

use crate::error::{Error, Result};

/// Square matrix of classification counts; rows are true classes, columns
/// predicted classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionMatrix {
    classes: usize,
    counts: Vec<u64>, // row-major, classes * classes
}

impl ConfusionMatrix {
    /// Builds from explicit rows; every row must have the same length as
    /// the number of rows.
    pub fn from_rows(rows: &[Vec<u64>]) -> Result<Self> {
        let classes = rows.len();
        if classes == 0 {
            return Err(Error::EmptyMatrix);
        }
        let mut counts = Vec::with_capacity(classes * classes);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != classes {
                return Err(Error::RaggedRows {
                    line: i + 1,
                    expected: classes,
                    found: row.len(),
                });
            }
            counts.extend_from_slice(row);
        }
        Ok(Self { classes, counts })
    }

    /// Number of classes (matrix side length).
    pub fn classes(&self) -> usize {
        self.classes
    }

    /// Count of samples with true class `i` predicted as class `j`.
    pub fn count(&self, i: usize, j: usize) -> u64 {
        self.counts[i * self.classes + j]
    }

    /// Total number of counted samples.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of samples whose true class is `i`.
    pub fn row_sum(&self, i: usize) -> u64 {
        (0..self.classes).map(|j| self.count(i, j)).sum()
    }

    /// Number of samples predicted as class `j`.
    pub fn col_sum(&self, j: usize) -> u64 {
        (0..self.classes).map(|i| self.count(i, j)).sum()
    }

    /// Sum of the diagonal (correctly classified samples).
    pub fn trace(&self) -> u64 {
        (0..self.classes).map(|i| self.count(i, i)).sum()
    }

    /// Rows as owned vectors, for serialization.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        (0..self.classes)
            .map(|i| (0..self.classes).map(|j| self.count(i, j)).collect())
            .collect()
    }
}

/// Tallies a confusion matrix from aligned true/predicted 0-based labels.
pub fn confusion_matrix(
    y_true: &[usize],
    y_pred: &[usize],
    classes: usize,
) -> Result<ConfusionMatrix> {
    if y_true.len() != y_pred.len() {
        return Err(Error::LengthMismatch(format!(
            "{} true labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if classes == 0 {
        return Err(Error::InvalidArgs("need at least one class".into()));
    }
    let mut counts = vec![0u64; classes * classes];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t >= classes {
            return Err(Error::IndexOutOfRange { index: t, classes });
        }
        if p >= classes {
            return Err(Error::IndexOutOfRange { index: p, classes });
        }
        counts[t * classes + p] += 1;
    }
    Ok(ConfusionMatrix { classes, counts })
}

/// Overall accuracy: fraction of samples on the diagonal.
pub fn overall_accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(cm.trace() as f64 / total as f64)
}

/// Average accuracy: unweighted mean of per-class recalls. Errors with the
/// 1-based class number if any class has no samples.
pub fn average_accuracy(cm: &ConfusionMatrix) -> Result<f64> {
    if cm.total() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut sum = 0.0;
    for i in 0..cm.classes() {
        let row = cm.row_sum(i);
        if row == 0 {
            return Err(Error::EmptyClass(i + 1));
        }
        sum += cm.count(i, i) as f64 / row as f64;
    }
    Ok(sum / cm.classes() as f64)
}

/// Cohen's kappa: `(p_o - p_e) / (1 - p_e)` with observed agreement `p_o`
/// and chance agreement `p_e` from the row/column marginals.
///
/// When the marginals force `p_e = 1` — which happens exactly when all
/// counts sit in a single diagonal cell — agreement is perfect and the
/// limit value 1.0 is returned instead of dividing by zero.
pub fn kappa(cm: &ConfusionMatrix) -> Result<f64> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::EmptyMatrix);
    }
    let total_sq = (total as u128) * (total as u128);
    let mut chance: u128 = 0;
    for i in 0..cm.classes() {
        chance += (cm.row_sum(i) as u128) * (cm.col_sum(i) as u128);
    }
    if chance == total_sq {
        // Cauchy-Schwarz on the marginals: equality holds only when one
        // row/column pair carries all the mass, i.e. a single diagonal
        // cell, so observed agreement is also perfect.
        return Ok(1.0);
    }
    let p_o = cm.trace() as f64 / total as f64;
    let p_e = chance as f64 / total_sq as f64;
    Ok((p_o - p_e) / (1.0 - p_e))
}

/// Model-count comparison for a signal dimension `n` and sparsity `k`:
/// a synthesis dictionary selects one of ~`k log2(n / k)` subspaces
/// (Stirling estimate), while an analysis operator with `p` rows selects
/// among `p` one-row restrictions here reported as the row count itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubspaceCounts {
    /// Stirling estimate `k * log2(n / k)` of the log2 number of synthesis
    /// subspaces; real-valued, round up for a whole-subspace count.
    pub synthesis: f64,
    /// Number of analysis rows, i.e. the transform row count `p`.
    pub analysis: u64,
}

/// Computes [`SubspaceCounts`] for signal dimension `n`, sparsity `k`,
/// and analysis row count `p`.
pub fn subspace_counts(n: u64, k: u64, p: u64) -> Result<SubspaceCounts> {
    if n == 0 || k == 0 || p == 0 {
        return Err(Error::InvalidArgs("n, k, and p must all be >= 1".into()));
    }
    if k > n {
        return Err(Error::InvalidArgs(format!(
            "sparsity k = {k} cannot exceed dimension n = {n}"
        )));
    }
    let synthesis = k as f64 * (n as f64 / k as f64).log2();
    Ok(SubspaceCounts {
        synthesis,
        analysis: p,
    })
}

/// Per-class row of a metrics report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassReport {
    /// 1-based class number, matching file labels.
    pub class: usize,
    /// Training samples for this class, when known.
    pub train_count: Option<u64>,
    /// Test samples for this class (confusion row sum).
    pub test_count: u64,
    /// Per-class recall in [0, 1].
    pub accuracy: f64,
}

/// Full evaluation report: per-class accuracy plus the three aggregate
/// metrics and the raw confusion counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub per_class: Vec<ClassReport>,
    pub overall_accuracy: f64,
    pub average_accuracy: f64,
    pub kappa: f64,
    pub confusion: Vec<Vec<u64>>,
}

impl MetricsReport {
    /// Assembles the report from a confusion matrix; `train_counts`, when
    /// given, must have one entry per class.
    pub fn from_confusion(cm: &ConfusionMatrix, train_counts: Option<&[u64]>) -> Result<Self> {
        if let Some(tc) = train_counts {
            if tc.len() != cm.classes() {
                return Err(Error::LengthMismatch(format!(
                    "{} train counts for {} classes",
                    tc.len(),
                    cm.classes()
                )));
            }
        }
        let overall = overall_accuracy(cm)?;
        let average = average_accuracy(cm)?;
        let kap = kappa(cm)?;
        let per_class = (0..cm.classes())
            .map(|i| {
                let row = cm.row_sum(i);
                ClassReport {
                    class: i + 1,
                    train_count: train_counts.map(|tc| tc[i]),
                    test_count: row,
                    // row > 0 was checked by average_accuracy
                    accuracy: cm.count(i, i) as f64 / row as f64,
                }
            })
            .collect();
        Ok(Self {
            per_class,
            overall_accuracy: overall,
            average_accuracy: average,
            kappa: kap,
            confusion: cm.rows(),
        })
    }

    /// Plain-text table with one row per class and the aggregate metrics
    /// at the bottom.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str("Class  Train   Test  Accuracy(%)\n");
        for row in &self.per_class {
            let train = row
                .train_count
                .map(|t| t.to_string())
                .unwrap_or_else(|| "-".to_string());
            out.push_str(&format!(
                "{:<5}  {:>5}  {:>5}  {:>11.2}\n",
                row.class,
                train,
                row.test_count,
                row.accuracy * 100.0
            ));
        }
        out.push_str(&format!("OA(%)  {:>26.2}\n", self.overall_accuracy * 100.0));
        out.push_str(&format!("AA(%)  {:>26.2}\n", self.average_accuracy * 100.0));
        out.push_str(&format!("Kappa  {:>26.4}\n", self.kappa));
        out
    }
}
