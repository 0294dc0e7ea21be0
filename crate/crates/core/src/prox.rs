//! Proximal operators and the inner sparse-coding solvers.
//!
//! Two coefficient updates live here. `sparse_code_transform` is the
//! one-shot elementwise shrinkage used when the code only has to match the
//! transformed signal. `ista_stacked` handles the label-consistent case,
//! where the code must simultaneously approximate the transformed signal
//! and map onto a label vector through the classifier: stacking the two
//! residuals gives a single l1-regularized least-squares problem that a
//! proximal-gradient iteration solves with a constant step `1 / (1 +
//! sigma_max(M)^2)`, the reciprocal of the stacked operator's Lipschitz
//! constant.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{CoefficientMatrix, DataMatrix, Hyperparams, IstaReport, LabelMatrix};

/// Elementwise soft-threshold kernel; assumes finite `a` and `t >= 0`.
#[inline]
pub(crate) fn shrink(a: f64, t: f64) -> f64 {
    let m = a.abs() - t;
    if m > 0.0 {
        m * a.signum()
    } else {
        0.0
    }
}

/// Soft-thresholding operator: the proximal map of `t * |.|`.
///
/// Returns `sign(a) * max(|a| - t, 0)`, which is the unique minimizer of
/// `(z - a)^2 + 2 t |z|`.
pub fn soft_threshold(a: f64, t: f64) -> Result<f64> {
    if !a.is_finite() {
        return Err(Error::NonFinite("soft_threshold input".into()));
    }
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgs(format!(
            "threshold must be finite and >= 0, got {t}"
        )));
    }
    Ok(shrink(a, t))
}

/// Sparse codes for a batch of samples by shrinking the transformed
/// signals: `Z = shrink(T X, thresh)` column by column.
pub fn sparse_code_transform(
    t: &DMatrix<f64>,
    x: &DataMatrix,
    thresh: f64,
) -> Result<CoefficientMatrix> {
    if t.ncols() != x.feature_count() {
        return Err(Error::DimensionMismatch(format!(
            "transform expects {} features but data has {}",
            t.ncols(),
            x.feature_count()
        )));
    }
    if !t.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("transform matrix".into()));
    }
    if !(thresh >= 0.0 && thresh.is_finite()) {
        return Err(Error::InvalidArgs(format!(
            "threshold must be finite and >= 0, got {thresh}"
        )));
    }
    let mut z = t * x.values();
    z.apply(|v| *v = shrink(*v, thresh));
    CoefficientMatrix::new(z)
}

/// Largest singular value squared, or 0 for an all-zero matrix.
fn spectral_norm_sq(m: &DMatrix<f64>) -> Result<f64> {
    if m.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("SVD of classifier map did not converge".into()))?
        .singular_values;
    Ok(sv.max() * sv.max())
}

/// Shared state for repeated single-column solves against the same
/// classifier map.
struct StackedProblem<'a> {
    m: &'a DMatrix<f64>,
    m_t: DMatrix<f64>,
    step: f64,
    thresh: f64,
}

impl<'a> StackedProblem<'a> {
    fn new(m: &'a DMatrix<f64>, mu: f64, ctl: &Hyperparams) -> Result<Self> {
        let lipschitz = 1.0 + spectral_norm_sq(m)?;
        let step = 1.0 / lipschitz;
        let thresh = ctl.threshold_convention.threshold(mu) * step;
        Ok(Self {
            m,
            m_t: m.transpose(),
            step,
            thresh,
        })
    }

    /// Proximal-gradient iteration for one column:
    /// minimize `|t_x - z|^2 + |q - M z|^2 + weighted l1`.
    fn solve(
        &self,
        t_x: &DVector<f64>,
        q: &DVector<f64>,
        warm: Option<&DVector<f64>>,
        ctl: &Hyperparams,
    ) -> Result<(DVector<f64>, IstaReport)> {
        let p = t_x.len();
        let c = q.len();
        let mut z = match warm {
            Some(w) => {
                if w.len() != p {
                    return Err(Error::DimensionMismatch(format!(
                        "warm start has {} entries, expected {p}",
                        w.len()
                    )));
                }
                w.clone()
            }
            None => DVector::zeros(p),
        };
        let mut residual = DVector::zeros(c);
        let mut grad = DVector::zeros(p);
        let mut z_next = DVector::zeros(p);
        let mut iterations_used = 0;
        let mut final_rel_change = f64::INFINITY;
        let mut converged = false;
        for _ in 0..ctl.ista_max_iters {
            iterations_used += 1;
            // residual = M z - q
            residual.gemv(1.0, self.m, &z, 0.0);
            residual -= q;
            // grad = (z - t_x) + M^T residual  (half the smooth gradient)
            grad.copy_from(&z);
            grad -= t_x;
            grad.gemv(1.0, &self.m_t, &residual, 1.0);
            let mut diff_sq = 0.0;
            let mut norm_sq = 0.0;
            for i in 0..p {
                let zi = shrink(z[i] - self.step * grad[i], self.thresh);
                if !zi.is_finite() {
                    return Err(Error::NonFinite("coefficient iterate".into()));
                }
                let d = zi - z[i];
                diff_sq += d * d;
                norm_sq += z[i] * z[i];
                z_next[i] = zi;
            }
            std::mem::swap(&mut z, &mut z_next);
            final_rel_change = diff_sq.sqrt() / norm_sq.sqrt().max(f64::MIN_POSITIVE);
            if final_rel_change < ctl.ista_tol {
                converged = true;
                break;
            }
        }
        Ok((
            z,
            IstaReport {
                iterations_used,
                final_rel_change,
                converged,
            },
        ))
    }
}

/// Solves the stacked l1 problem for one sample:
///
/// minimize over `z`: `|t_x - z|^2 + |q - M z|^2 + mu-weighted l1(z)`,
///
/// by proximal-gradient iteration with constant step `1 / (1 +
/// sigma_max(M)^2)`. The l1 weight follows `ctl.threshold_convention`.
/// `warm` seeds the iterate (zeros when absent).
pub fn ista_stacked(
    t_x: &DVector<f64>,
    m: &DMatrix<f64>,
    q: &DVector<f64>,
    mu: f64,
    ctl: &Hyperparams,
    warm: Option<&DVector<f64>>,
) -> Result<(DVector<f64>, IstaReport)> {
    ctl.validate()?;
    if m.ncols() != t_x.len() {
        return Err(Error::DimensionMismatch(format!(
            "classifier map has {} columns but code has {} entries",
            m.ncols(),
            t_x.len()
        )));
    }
    if m.nrows() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "classifier map has {} rows but label vector has {} entries",
            m.nrows(),
            q.len()
        )));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgs(format!(
            "mu must be finite and > 0, got {mu}"
        )));
    }
    for (name, v) in [("signal", t_x.iter()), ("label vector", q.iter())] {
        let mut v = v;
        if !v.all(|e| e.is_finite()) {
            return Err(Error::NonFinite(name.into()));
        }
    }
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("classifier map".into()));
    }
    let problem = StackedProblem::new(m, mu, ctl)?;
    problem.solve(t_x, q, warm, ctl)
}

/// Solves the stacked l1 problem for every sample column.
///
/// Equivalent to calling [`ista_stacked`] per column of `T X` and `Q`,
/// but hoists the operator-dependent setup. `warm` (when present) must
/// have matching shape; its columns seed the per-sample iterates.
pub fn batch_coefficient_update(
    t: &DMatrix<f64>,
    x: &DataMatrix,
    m: &DMatrix<f64>,
    q: &LabelMatrix,
    mu: f64,
    ctl: &Hyperparams,
    warm: Option<&CoefficientMatrix>,
) -> Result<CoefficientMatrix> {
    ctl.validate()?;
    if t.ncols() != x.feature_count() {
        return Err(Error::DimensionMismatch(format!(
            "transform expects {} features but data has {}",
            t.ncols(),
            x.feature_count()
        )));
    }
    if m.ncols() != t.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "classifier map has {} columns but transform has {} atoms",
            m.ncols(),
            t.nrows()
        )));
    }
    if m.nrows() != q.class_count() {
        return Err(Error::DimensionMismatch(format!(
            "classifier map has {} rows but labels have {} classes",
            m.nrows(),
            q.class_count()
        )));
    }
    if x.sample_count() != q.sample_count() {
        return Err(Error::DimensionMismatch(format!(
            "feature matrix has {} samples but label matrix has {}",
            x.sample_count(),
            q.sample_count()
        )));
    }
    if let Some(w) = warm {
        if w.atom_count() != t.nrows() || w.sample_count() != x.sample_count() {
            return Err(Error::DimensionMismatch(format!(
                "warm start is {}x{}, expected {}x{}",
                w.atom_count(),
                w.sample_count(),
                t.nrows(),
                x.sample_count()
            )));
        }
    }
    if !t.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("transform matrix".into()));
    }
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("classifier map".into()));
    }
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgs(format!(
            "mu must be finite and > 0, got {mu}"
        )));
    }
    let problem = StackedProblem::new(m, mu, ctl)?;
    let tx = t * x.values();
    let n = x.sample_count();
    let p = t.nrows();
    let mut z = DMatrix::zeros(p, n);
    for j in 0..n {
        let t_x = tx.column(j).into_owned();
        let qj = q.values().column(j).into_owned();
        let warm_col = warm.map(|w| w.values().column(j).into_owned());
        let (zj, _) = problem.solve(&t_x, &qj, warm_col.as_ref(), ctl)?;
        z.set_column(j, &zj);
    }
    CoefficientMatrix::new(z)
}
