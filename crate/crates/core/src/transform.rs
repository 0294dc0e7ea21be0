//! Transform update and objective evaluation.
//!
//! The transform subproblem
//!
//! ```text
//! minimize over T:  |T X - Z|_F^2 + lambda * (|T|_F^2 - log det T)
//! ```
//!
//! has a closed-form solution. With `L` the lower Cholesky factor of
//! `X X^T + lambda I` and the thin SVD `L^{-1} X Z^T = U S V^T`, the
//! minimizer is
//!
//! ```text
//! T = 0.5 * V (S + (S^2 + 2 lambda I)^{1/2}) U^T L^{-1},
//! ```
//!
//! i.e. each singular value `s` of the whitened cross-correlation maps to
//! `(s + sqrt(s^2 + 2 lambda)) / 2 > 0`, which keeps the updated transform
//! non-singular for any data. For square transforms (`p = d`) this is the
//! exact global minimizer. For rectangular transforms (`p < d`) the same
//! formula is used with `log det` read as the sum of log singular values;
//! it is then a descent update, and exactly stationary when `X X^T` is a
//! multiple of the identity.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::model::{CoefficientMatrix, DataMatrix, LabelMatrix};

/// Lower-triangular Cholesky factor of `X X^T + lambda I`.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: DMatrix<f64>,
}

impl CholeskyFactor {
    /// Borrow the lower-triangular factor `L`.
    pub fn lower(&self) -> &DMatrix<f64> {
        &self.l
    }

    /// `L^{-1} B` by forward substitution.
    pub(crate) fn solve_left(&self, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        self.l.solve_lower_triangular(b).ok_or_else(|| {
            Error::NumericalFailure("forward substitution against Cholesky factor failed".into())
        })
    }

    /// `B L^{-1}` by back substitution on the transposed system.
    pub(crate) fn solve_right(&self, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let bt = b.transpose();
        let yt = self
            .l
            .transpose()
            .solve_upper_triangular(&bt)
            .ok_or_else(|| {
                Error::NumericalFailure("back substitution against Cholesky factor failed".into())
            })?;
        Ok(yt.transpose())
    }
}

/// Cholesky factorization of the regularized Gram matrix
/// `X X^T + lambda I`, which is positive definite for any `lambda > 0`.
pub fn cholesky_factor(x: &DataMatrix, lambda: f64) -> Result<CholeskyFactor> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgs(format!(
            "lambda must be finite and > 0, got {lambda}"
        )));
    }
    let d = x.feature_count();
    let mut gram = x.values() * x.values().transpose();
    for i in 0..d {
        gram[(i, i)] += lambda;
    }
    let chol = nalgebra::Cholesky::new(gram).ok_or_else(|| {
        Error::NumericalFailure("Cholesky factorization of X X^T + lambda I failed".into())
    })?;
    Ok(CholeskyFactor { l: chol.l() })
}

/// Sum of log singular values of `t`; errors if any singular value is zero.
fn log_det_sigma(t: &DMatrix<f64>) -> Result<f64> {
    let sv = singular_values(t)?;
    let mut sum = 0.0;
    for s in sv.iter() {
        if *s <= 0.0 {
            return Err(Error::SingularTransform);
        }
        sum += s.ln();
    }
    Ok(sum)
}

fn singular_values(t: &DMatrix<f64>) -> Result<DVector<f64>> {
    let svd = t
        .clone()
        .try_svd(false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    Ok(svd.singular_values)
}

/// Closed-form minimizer of the transform subproblem (see module docs).
///
/// Requires `z.atom_count() <= x.feature_count()` (wide transform) and
/// matching sample counts. The returned matrix always has strictly
/// positive singular values.
pub fn transform_closed_form(
    x: &DataMatrix,
    z: &CoefficientMatrix,
    lambda: f64,
) -> Result<DMatrix<f64>> {
    let d = x.feature_count();
    let p = z.atom_count();
    if z.sample_count() != x.sample_count() {
        return Err(Error::DimensionMismatch(format!(
            "feature matrix has {} samples but coefficients have {}",
            x.sample_count(),
            z.sample_count()
        )));
    }
    if p > d {
        return Err(Error::DimensionMismatch(format!(
            "coefficients declare {p} atoms but data has only {d} features"
        )));
    }
    let factor = cholesky_factor(x, lambda)?;
    let cross = x.values() * z.values().transpose(); // d x p
    let whitened = factor.solve_left(&cross)?; // L^{-1} X Z^T
    let svd = whitened
        .try_svd(true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| {
            Error::NumericalFailure("SVD of whitened cross-correlation failed".into())
        })?;
    let u = svd.u.as_ref().expect("u requested"); // d x p
    let v_t = svd.v_t.as_ref().expect("v_t requested"); // p x p
    let gamma = DVector::from_iterator(
        p,
        svd.singular_values
            .iter()
            .map(|s| 0.5 * (s + (s * s + 2.0 * lambda).sqrt())),
    );
    let core = v_t.transpose() * DMatrix::from_diagonal(&gamma) * u.transpose(); // p x d
    let t = factor.solve_right(&core)?;
    if !t.iter().all(|v| v.is_finite()) {
        // finite inputs produced a non-finite result: an algorithmic
        // breakdown (overflow / catastrophic conditioning), not bad data
        return Err(Error::NumericalFailure(
            "transform update produced non-finite values".into(),
        ));
    }
    // gamma > 0 guarantees this mathematically; verify against numerical
    // degradation in the substitutions (a NaN singular value also fails)
    let smin = singular_values(&t)?.min();
    if !smin.is_finite() || smin <= 0.0 {
        return Err(Error::NumericalFailure(
            "updated transform lost full row rank".into(),
        ));
    }
    Ok(t)
}

/// Unsupervised transform-learning objective
/// `|T X - Z|_F^2 + lambda (|T|_F^2 - log det T) + mu |Z|_1`,
/// with `log det` read as the sum of log singular values of `T`.
pub fn tl_objective(
    t: &DMatrix<f64>,
    x: &DataMatrix,
    z: &CoefficientMatrix,
    lambda: f64,
    mu: f64,
) -> Result<f64> {
    if t.ncols() != x.feature_count() {
        return Err(Error::DimensionMismatch(format!(
            "transform expects {} features but data has {}",
            t.ncols(),
            x.feature_count()
        )));
    }
    if t.nrows() != z.atom_count() {
        return Err(Error::DimensionMismatch(format!(
            "transform has {} atoms but coefficients have {}",
            t.nrows(),
            z.atom_count()
        )));
    }
    if x.sample_count() != z.sample_count() {
        return Err(Error::DimensionMismatch(format!(
            "feature matrix has {} samples but coefficients have {}",
            x.sample_count(),
            z.sample_count()
        )));
    }
    if !t.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("transform matrix".into()));
    }
    if !(lambda.is_finite() && mu.is_finite()) {
        return Err(Error::InvalidArgs("lambda and mu must be finite".into()));
    }
    let fit = (t * x.values() - z.values()).norm_squared();
    let fro = t.norm_squared();
    let log_det = log_det_sigma(t)?;
    let l1: f64 = z.values().iter().map(|v| v.abs()).sum();
    Ok(fit + lambda * (fro - log_det) + mu * l1)
}

/// Label-consistent objective: [`tl_objective`] plus the label-fit term
/// `|Q - M Z|_F^2`.
pub fn lctl_objective(
    t: &DMatrix<f64>,
    m: &DMatrix<f64>,
    x: &DataMatrix,
    z: &CoefficientMatrix,
    q: &LabelMatrix,
    lambda: f64,
    mu: f64,
) -> Result<f64> {
    if m.ncols() != z.atom_count() {
        return Err(Error::DimensionMismatch(format!(
            "classifier map has {} columns but coefficients have {} atoms",
            m.ncols(),
            z.atom_count()
        )));
    }
    if m.nrows() != q.class_count() {
        return Err(Error::DimensionMismatch(format!(
            "classifier map has {} rows but labels have {} classes",
            m.nrows(),
            q.class_count()
        )));
    }
    if q.sample_count() != z.sample_count() {
        return Err(Error::DimensionMismatch(format!(
            "label matrix has {} samples but coefficients have {}",
            q.sample_count(),
            z.sample_count()
        )));
    }
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("classifier map".into()));
    }
    let base = tl_objective(t, x, z, lambda, mu)?;
    let label_fit = (q.values() - m * z.values()).norm_squared();
    Ok(base + label_fit)
}
