//! Alternating-minimization training loops.
//!
//! Both trainers follow the same pattern: a seeded orthonormal
//! initialization, then alternation over closed-form or proximal
//! subproblem solvers, tracing the joint objective after every outer
//! iteration and stopping on relative objective change.
//!
//! All randomness flows from the `seed` hyperparameter through one
//! counter-based generator, so training is bit-reproducible across runs
//! and platforms.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::model::{
    validate_pair, CoefficientMatrix, DataMatrix, Hyperparams, LabelMatrix, LctlModel, TrainReport,
    TransformModel,
};
use crate::prox::{batch_coefficient_update, sparse_code_transform};
use crate::transform::{lctl_objective, tl_objective, transform_closed_form};

/// Ridge added to `Z Z^T` when solving for the classifier map, so the
/// solve stays well-posed even when codes are rank-deficient (e.g. very
/// sparse or duplicated).
pub const CLASSIFIER_RIDGE: f64 = 1e-8;

/// Which sub-update an observed objective value follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LctlStep {
    /// Value at the initialization, before any update.
    Init,
    /// After the closed-form transform update.
    Transform,
    /// After the batch coefficient update.
    Coefficients,
    /// After the least-squares classifier update.
    Classifier,
}

/// ChaCha20 stream id for the initializer ("TRANSFOR" in ASCII). Seeded
/// components each draw from their own stream so that reusing one seed
/// across them (a natural CLI habit) never correlates their output. Without
/// this, a seed shared with the synthetic data generator reproduces its
/// planted basis here, which starts training at a degenerate stationary
/// point where whole classes have exactly zero coefficients.
const INIT_TRANSFORM_STREAM: u64 = 0x5452_414E_5346_4F52;

/// Seeded orthonormal-row initialization: the first `p` rows of the
/// orthonormal factor of a `d x d` standard Gaussian matrix.
pub fn init_transform(p: usize, d: usize, seed: u64) -> Result<TransformModel> {
    if p == 0 || p > d {
        return Err(Error::InvalidArgs(format!(
            "need 1 <= atoms <= features, got atoms = {p}, features = {d}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(INIT_TRANSFORM_STREAM);
    let gauss = DMatrix::from_fn(d, d, |_, _| StandardNormal.sample(&mut rng));
    let q = gauss.qr().q();
    let t = q.rows(0, p).into_owned();
    let hyperparams = Hyperparams {
        atoms: p,
        seed,
        ..Hyperparams::default()
    };
    TransformModel::new(t, hyperparams)
}

/// Least-squares classifier map `M = Q Z^T (Z Z^T + ridge I)^{-1}`.
pub fn update_classifier_map(
    z: &CoefficientMatrix,
    q: &LabelMatrix,
    ridge: f64,
) -> Result<DMatrix<f64>> {
    if z.sample_count() != q.sample_count() {
        return Err(Error::DimensionMismatch(format!(
            "coefficients have {} samples but labels have {}",
            z.sample_count(),
            q.sample_count()
        )));
    }
    if !(ridge >= 0.0 && ridge.is_finite()) {
        return Err(Error::InvalidArgs(format!(
            "ridge must be finite and >= 0, got {ridge}"
        )));
    }
    let p = z.atom_count();
    let mut gram = z.values() * z.values().transpose();
    for i in 0..p {
        gram[(i, i)] += ridge;
    }
    let chol = nalgebra::Cholesky::new(gram).ok_or_else(|| {
        Error::NumericalFailure(
            "Z Z^T + ridge I is not positive definite; increase the ridge".into(),
        )
    })?;
    // Solve (Z Z^T + ridge I) M^T = Z Q^T, then transpose.
    let rhs = z.values() * q.values().transpose();
    let m_t = chol.solve(&rhs);
    let m = m_t.transpose();
    if !m.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("classifier map".into()));
    }
    Ok(m)
}

fn rel_change(prev: f64, next: f64) -> f64 {
    (prev - next).abs() / prev.abs().max(f64::MIN_POSITIVE)
}

/// Unsupervised transform learning by alternating shrinkage and the
/// closed-form transform update.
///
/// Returns the learned transform, the final coefficients, and a report
/// whose trace holds the objective at the initialization and after each
/// outer iteration. `max_outer = 0` returns the initialization unchanged.
pub fn train_unsupervised(
    x: &DataMatrix,
    hp: &Hyperparams,
) -> Result<(TransformModel, CoefficientMatrix, TrainReport)> {
    hp.validate()?;
    if hp.atoms > x.feature_count() {
        return Err(Error::InvalidArgs(format!(
            "atoms = {} exceeds feature count {}",
            hp.atoms,
            x.feature_count()
        )));
    }
    let start = Instant::now();
    let thresh = hp.shrink_threshold();
    let l1_weight = hp.effective_l1_weight();
    let mut t = init_transform(hp.atoms, x.feature_count(), hp.seed)?
        .matrix()
        .clone();
    let mut z = sparse_code_transform(&t, x, thresh)?;
    let mut trace = vec![tl_objective(&t, x, &z, hp.lambda, l1_weight)?];
    let mut converged = false;
    let mut outer_iterations = 0;
    for _ in 0..hp.max_outer {
        outer_iterations += 1;
        z = sparse_code_transform(&t, x, thresh)?;
        t = transform_closed_form(x, &z, hp.lambda)?;
        let obj = tl_objective(&t, x, &z, hp.lambda, l1_weight)?;
        let prev = *trace
            .last()
            .expect("trace is seeded with the initial value");
        trace.push(obj);
        if rel_change(prev, obj) < hp.rel_tol {
            converged = true;
            break;
        }
    }
    let model = TransformModel::new(t, hp.clone())?;
    let report = TrainReport {
        outer_iterations,
        objective_trace: trace,
        converged,
        seed: hp.seed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((model, z, report))
}

/// Label-consistent training; see [`train_lctl_observed`] for the
/// loop structure. Class names default to 1-based numbers.
pub fn train_lctl(
    x: &DataMatrix,
    q: &LabelMatrix,
    hp: &Hyperparams,
) -> Result<(LctlModel, TrainReport)> {
    train_lctl_observed(x, q, hp, None)
}

/// Label-consistent training with an optional per-sub-update observer.
///
/// Each outer iteration updates, in order: the transform (closed form),
/// the coefficients (stacked proximal solver, warm-started from the
/// previous coefficients), and the classifier map (ridge least squares).
/// When an observer is supplied, the joint objective is evaluated after
/// every sub-update and reported as `(step, outer_iteration, value)`;
/// each such value is non-increasing along the run up to solver
/// tolerances. Without an observer only the per-iteration trace is
/// evaluated.
pub fn train_lctl_observed(
    x: &DataMatrix,
    q: &LabelMatrix,
    hp: &Hyperparams,
    mut observer: Option<&mut dyn FnMut(LctlStep, usize, f64)>,
) -> Result<(LctlModel, TrainReport)> {
    hp.validate()?;
    validate_pair(x, q)?;
    if hp.atoms > x.feature_count() {
        return Err(Error::InvalidArgs(format!(
            "atoms = {} exceeds feature count {}",
            hp.atoms,
            x.feature_count()
        )));
    }
    let histogram = q.class_histogram();
    if let Some(empty) = histogram.iter().position(|&count| count == 0) {
        return Err(Error::Degenerate(format!(
            "class {} has no training samples",
            empty + 1
        )));
    }
    let start = Instant::now();
    let thresh = hp.shrink_threshold();
    let l1_weight = hp.effective_l1_weight();

    let mut t = init_transform(hp.atoms, x.feature_count(), hp.seed)?
        .matrix()
        .clone();
    let mut z = sparse_code_transform(&t, x, thresh)?;
    let mut m = update_classifier_map(&z, q, CLASSIFIER_RIDGE)?;

    let initial = lctl_objective(&t, &m, x, &z, q, hp.lambda, l1_weight)?;
    if let Some(obs) = observer.as_deref_mut() {
        obs(LctlStep::Init, 0, initial);
    }
    let mut trace = vec![initial];
    let mut converged = false;
    let mut outer_iterations = 0;
    for iter in 1..=hp.max_outer {
        outer_iterations = iter;
        t = transform_closed_form(x, &z, hp.lambda)?;
        if let Some(obs) = observer.as_deref_mut() {
            let obj = lctl_objective(&t, &m, x, &z, q, hp.lambda, l1_weight)?;
            obs(LctlStep::Transform, iter, obj);
        }
        z = batch_coefficient_update(&t, x, &m, q, hp.mu, hp, Some(&z))?;
        if let Some(obs) = observer.as_deref_mut() {
            let obj = lctl_objective(&t, &m, x, &z, q, hp.lambda, l1_weight)?;
            obs(LctlStep::Coefficients, iter, obj);
        }
        m = update_classifier_map(&z, q, CLASSIFIER_RIDGE)?;
        let obj = lctl_objective(&t, &m, x, &z, q, hp.lambda, l1_weight)?;
        if let Some(obs) = observer.as_deref_mut() {
            obs(LctlStep::Classifier, iter, obj);
        }
        let prev = *trace
            .last()
            .expect("trace is seeded with the initial value");
        trace.push(obj);
        if rel_change(prev, obj) < hp.rel_tol {
            converged = true;
            break;
        }
    }
    let class_names = (1..=q.class_count()).map(|i| i.to_string()).collect();
    let transform = TransformModel::new(t, hp.clone())?;
    let model = LctlModel::new(transform, m, class_names, trace.clone(), hp.seed)?;
    let report = TrainReport {
        outer_iterations,
        objective_trace: trace,
        converged,
        seed: hp.seed,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((model, report))
}
