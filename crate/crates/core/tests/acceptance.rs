//! Acceptance gate: one test per release criterion, each printing a
//! `criterion N: PASS` line (run with `--nocapture` to see them).
//!
//! Every numerical criterion is checked against an independent oracle
//! implemented in this file — golden-section search, exhaustive sign
//! enumeration, gradient descent, finite differences — never against the
//! library's own formulas.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use lctl::classifier::predict_batch;
use lctl::data::split::{split, SplitMode, SplitSpec};
use lctl::data::synth::synth_dataset;
use lctl::metrics::{
    average_accuracy, confusion_matrix, kappa, overall_accuracy, subspace_counts, ConfusionMatrix,
    MetricsReport,
};
use lctl::prox::{ista_stacked, soft_threshold};
use lctl::trainer::{init_transform, train_lctl, train_lctl_observed, LctlStep};
use lctl::transform::transform_closed_form;
use lctl::{CoefficientMatrix, DataMatrix, Hyperparams, LabelMatrix};

fn assert_within_budget(elapsed: Duration, budget: Duration, what: &str) {
    assert!(
        elapsed <= budget,
        "{what} took {elapsed:?}, budget {budget:?}"
    );
}

// ---------------------------------------------------------------------------
// criterion 1: soft threshold vs golden-section search
// ---------------------------------------------------------------------------

/// Sign of f(c) - f(d) for f(z) = (z - a)^2 + 2 t |z|, computed from the
/// factored difference (c - d)(c + d - 2a) + 2t(|c| - |d|) so that the
/// comparison stays reliable far below the sqrt(eps) floor that naive
/// evaluation hits near a smooth minimum.
fn prox_objective_less(c: f64, d: f64, a: f64, t: f64) -> bool {
    let diff = if c >= 0.0 && d >= 0.0 {
        (c - d) * ((c + d - 2.0 * a) + 2.0 * t)
    } else if c <= 0.0 && d <= 0.0 {
        (c - d) * ((c + d - 2.0 * a) - 2.0 * t)
    } else {
        // bracket straddles the kink at zero: the linear term dominates
        (c - d) * (c + d - 2.0 * a) + 2.0 * t * (c.abs() - d.abs())
    };
    diff < 0.0
}

/// Golden-section minimizer of the prox objective on [lo, hi].
fn golden_section_min(a: f64, t: f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5.0_f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    while hi - lo > tol {
        if prox_objective_less(c, d, a, t) {
            hi = d;
            d = c;
            c = hi - inv_phi * (hi - lo);
        } else {
            lo = c;
            c = d;
            d = lo + inv_phi * (hi - lo);
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_01_prox_matches_golden_section_search() {
    let start = Instant::now();
    let mut rng = ChaCha20Rng::seed_from_u64(101);
    let mut worst = 0.0_f64;
    for _ in 0..1000 {
        let a = rng.gen_range(-3.0..3.0);
        let t = rng.gen_range(0.0..1.5);
        let ours = soft_threshold(a, t).unwrap();
        let bracket = a.abs() + 1.0;
        let oracle = golden_section_min(a, t, -bracket, bracket, 1e-12);
        worst = worst.max((ours - oracle).abs());
    }
    assert!(worst <= 1e-9, "worst disagreement {worst}");
    assert_within_budget(start.elapsed(), Duration::from_secs(1), "criterion 1");
    println!(
        "criterion 1: PASS - soft threshold matches golden-section search on 1000 pairs \
         (worst |diff| = {worst:.3e})"
    );
}

// ---------------------------------------------------------------------------
// criterion 2: stacked solver vs exhaustive sign enumeration
// ---------------------------------------------------------------------------

/// Objective of the stacked problem with l1 weight `mu`.
fn stacked_objective(
    z: &DVector<f64>,
    t_x: &DVector<f64>,
    m: &DMatrix<f64>,
    q: &DVector<f64>,
    mu: f64,
) -> f64 {
    (t_x - z).norm_squared()
        + (q - m * z).norm_squared()
        + mu * z.iter().map(|v| v.abs()).sum::<f64>()
}

/// Exhaustive oracle for p = 3: enumerate all 27 sign patterns, solve the
/// reduced stationarity system for each, keep sign-consistent candidates
/// that satisfy the subgradient bound on the zero coordinates, and return
/// the best objective value.
fn sign_enumeration_optimum(
    t_x: &DVector<f64>,
    m: &DMatrix<f64>,
    q: &DVector<f64>,
    mu: f64,
) -> f64 {
    let p = 3usize;
    // A = [I; M] stacked; A^T A = I + M^T M; A^T b = t_x + M^T q
    let ata = DMatrix::identity(p, p) + m.transpose() * m;
    let atb = t_x + m.transpose() * q;
    let mut best = f64::INFINITY;
    for pattern in 0..27u32 {
        let signs: Vec<f64> = (0..p)
            .map(|i| match (pattern / 3u32.pow(i as u32)) % 3 {
                0 => 0.0,
                1 => 1.0,
                _ => -1.0,
            })
            .collect();
        let active: Vec<usize> = (0..p).filter(|&i| signs[i] != 0.0).collect();
        let mut z = DVector::zeros(p);
        if !active.is_empty() {
            let k = active.len();
            let sub = DMatrix::from_fn(k, k, |r, c| ata[(active[r], active[c])]);
            let rhs = DVector::from_fn(k, |r, _| atb[active[r]] - 0.5 * mu * signs[active[r]]);
            let sol = match sub.lu().solve(&rhs) {
                Some(s) => s,
                None => continue,
            };
            let mut consistent = true;
            for (r, &i) in active.iter().enumerate() {
                if sol[r] * signs[i] <= 0.0 {
                    consistent = false;
                    break;
                }
                z[i] = sol[r];
            }
            if !consistent {
                continue;
            }
        }
        // subgradient bound on the zero coordinates
        let grad = 2.0 * (&ata * &z - &atb);
        let ok_zeros = (0..p)
            .filter(|&i| signs[i] == 0.0)
            .all(|i| grad[i].abs() <= mu + 1e-9);
        if !ok_zeros {
            continue;
        }
        best = best.min(stacked_objective(&z, t_x, m, q, mu));
    }
    assert!(best.is_finite(), "oracle found no consistent candidate");
    best
}

/// Max violation of the optimality conditions at `z`.
fn kkt_residual(
    z: &DVector<f64>,
    t_x: &DVector<f64>,
    m: &DMatrix<f64>,
    q: &DVector<f64>,
    mu: f64,
) -> f64 {
    let grad = 2.0 * (z - t_x) + 2.0 * m.transpose() * (m * z - q);
    let mut worst = 0.0_f64;
    for i in 0..z.len() {
        let v = if z[i] != 0.0 {
            (grad[i] + mu * z[i].signum()).abs()
        } else {
            (grad[i].abs() - mu).max(0.0)
        };
        worst = worst.max(v);
    }
    worst
}

#[test]
fn criterion_02_ista_matches_sign_enumeration() {
    let start = Instant::now();
    let p = 3;
    let c = 2;
    let mu = 0.3;
    let ctl = Hyperparams {
        atoms: p,
        ..Hyperparams::default() // default inner-solver tolerances
    };
    let mut worst_gap = 0.0_f64;
    let mut worst_kkt = 0.0_f64;
    for instance in 0..50u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(1000 + instance);
        let t_x = DVector::from_fn(p, |_, _| StandardNormal.sample(&mut rng));
        let m = DMatrix::from_fn(c, p, |_, _| StandardNormal.sample(&mut rng));
        let q = DVector::from_fn(c, |_, _| StandardNormal.sample(&mut rng));
        let (z, _) = ista_stacked(&t_x, &m, &q, mu, &ctl, None).unwrap();
        // exact convention: the solver minimizes the mu-weighted objective
        let ours = stacked_objective(&z, &t_x, &m, &q, mu);
        let oracle = sign_enumeration_optimum(&t_x, &m, &q, mu);
        let gap = (ours - oracle).abs();
        let kkt = kkt_residual(&z, &t_x, &m, &q, mu);
        worst_gap = worst_gap.max(gap);
        worst_kkt = worst_kkt.max(kkt);
        assert!(
            gap <= 1e-6,
            "instance {instance}: objective gap {gap} (ours {ours}, oracle {oracle})"
        );
        assert!(kkt <= 1e-4, "instance {instance}: KKT residual {kkt}");
    }
    assert_within_budget(start.elapsed(), Duration::from_secs(10), "criterion 2");
    println!(
        "criterion 2: PASS - stacked solver matches sign enumeration on 50 instances \
         (worst objective gap = {worst_gap:.3e}, worst KKT residual = {worst_kkt:.3e})"
    );
}

// ---------------------------------------------------------------------------
// criterion 3: closed-form transform update vs descent oracles
// ---------------------------------------------------------------------------

/// Smooth part of the transform objective with the log-det read through
/// singular values; oracle-side reimplementation.
fn smooth_objective(t: &DMatrix<f64>, x: &DMatrix<f64>, z: &DMatrix<f64>, lambda: f64) -> f64 {
    let fit = (t * x - z).norm_squared();
    let fro = t.norm_squared();
    let sv = t.clone().svd(false, false).singular_values;
    let mut log_det = 0.0;
    for s in sv.iter() {
        if *s <= 0.0 {
            return f64::INFINITY;
        }
        log_det += s.ln();
    }
    fit + lambda * (fro - log_det)
}

/// Same objective for the square case with the log-det via an LU
/// determinant, keeping the oracle independent of the SVD route.
fn square_objective(t: &DMatrix<f64>, x: &DMatrix<f64>, z: &DMatrix<f64>, lambda: f64) -> f64 {
    let det = t.determinant();
    if det == 0.0 || !det.is_finite() {
        return f64::INFINITY;
    }
    (t * x - z).norm_squared() + lambda * (t.norm_squared() - det.abs().ln())
}

/// Analytic gradient of [`square_objective`].
fn square_gradient(
    t: &DMatrix<f64>,
    x: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: f64,
) -> Option<DMatrix<f64>> {
    let inv_t = t.clone().try_inverse()?;
    Some(2.0 * (t * x - z) * x.transpose() + 2.0 * lambda * t - lambda * inv_t.transpose())
}

/// Gradient descent on the square objective with Barzilai-Borwein trial
/// steps and a monotone Armijo backtracking safeguard.
fn gd_minimize(
    x: &DMatrix<f64>,
    z: &DMatrix<f64>,
    lambda: f64,
    t0: DMatrix<f64>,
) -> (DMatrix<f64>, f64) {
    let mut t = t0;
    let mut f = square_objective(&t, x, z, lambda);
    let mut g = match square_gradient(&t, x, z, lambda) {
        Some(g) => g,
        None => return (t, f),
    };
    let mut step = 1e-3;
    for _ in 0..20_000 {
        let g_norm_sq = g.norm_squared();
        if g_norm_sq.sqrt() <= 1e-8 * f.abs().max(1.0) {
            break;
        }
        let mut s = step;
        let accepted = loop {
            let cand = &t - s * &g;
            let fc = square_objective(&cand, x, z, lambda);
            if fc <= f - 1e-4 * s * g_norm_sq {
                break Some((cand, fc));
            }
            s *= 0.5;
            if s < 1e-18 {
                break None;
            }
        };
        let (cand, fc) = match accepted {
            Some(v) => v,
            None => break,
        };
        let g_new = match square_gradient(&cand, x, z, lambda) {
            Some(g) => g,
            None => break,
        };
        let dt = &cand - &t;
        let dg = &g_new - &g;
        let denom = dt.dot(&dg);
        step = if denom > 0.0 {
            (dt.norm_squared() / denom).clamp(1e-12, 1e6)
        } else {
            s * 2.0
        };
        t = cand;
        f = fc;
        g = g_new;
    }
    (t, f)
}

/// Central-difference gradient norm of [`smooth_objective`] at `t`.
fn fd_gradient_norm(t: &DMatrix<f64>, x: &DMatrix<f64>, z: &DMatrix<f64>, lambda: f64) -> f64 {
    let h = 1e-6;
    let mut norm_sq = 0.0;
    for i in 0..t.nrows() {
        for j in 0..t.ncols() {
            let mut plus = t.clone();
            plus[(i, j)] += h;
            let mut minus = t.clone();
            minus[(i, j)] -= h;
            let g = (smooth_objective(&plus, x, z, lambda)
                - smooth_objective(&minus, x, z, lambda))
                / (2.0 * h);
            norm_sq += g * g;
        }
    }
    norm_sq.sqrt()
}

fn sparse_matrix(rows: usize, cols: usize, rng: &mut ChaCha20Rng) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let v: f64 = StandardNormal.sample(rng);
        soft_threshold(v, 0.5).unwrap()
    })
}

#[test]
fn criterion_03_closed_form_square_matches_gradient_descent() {
    let start = Instant::now();
    let (d, n) = (8, 40);
    let lambda = 0.1;
    let mut worst_rel = 0.0_f64;
    for seed in 0..10u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(300 + seed);
        let x = DMatrix::from_fn(d, n, |_, _| StandardNormal.sample(&mut rng));
        let z = sparse_matrix(d, n, &mut rng);
        let xm = DataMatrix::new(x.clone()).unwrap();
        let zm = CoefficientMatrix::new(z.clone()).unwrap();
        let t_closed = transform_closed_form(&xm, &zm, lambda).unwrap();
        let f_closed = square_objective(&t_closed, &x, &z, lambda);
        // two starts guard against the oracle stalling in a bad basin
        let (_, f_eye) = gd_minimize(&x, &z, lambda, DMatrix::identity(d, d));
        let t_rand = init_transform(d, d, 9000 + seed).unwrap().matrix().clone();
        let (_, f_rand) = gd_minimize(&x, &z, lambda, t_rand);
        let f_gd = f_eye.min(f_rand);
        let rel = (f_closed - f_gd).abs() / f_gd.abs().max(1.0);
        worst_rel = worst_rel.max(rel);
        assert!(
            rel <= 1e-6,
            "seed {seed}: closed form {f_closed} vs descent oracle {f_gd} (rel {rel})"
        );
        // the closed form may not be beaten
        assert!(f_closed <= f_gd + 1e-9 * f_gd.abs().max(1.0));
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 3a: PASS - square closed form matches gradient descent on 10 seeds \
         (worst relative gap = {worst_rel:.3e})"
    );
    assert_within_budget(elapsed, Duration::from_secs(30), "criterion 3a");
}

#[test]
fn criterion_03_closed_form_rectangular_descends_and_is_stationary() {
    let start = Instant::now();
    let (p, d, n) = (5usize, 12usize, 40usize);
    let lambda = 0.1;
    let mut worst_ratio = 0.0_f64;
    for seed in 0..10u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(350 + seed);
        // isotropic data: X = s * (orthonormal rows), so X X^T = s^2 I and
        // the closed form is exactly stationary for the rectangular
        // objective as well
        let gauss = DMatrix::from_fn(n, d, |_, _| StandardNormal.sample(&mut rng));
        let q_thin = gauss.qr().q(); // n x d, orthonormal columns
        let scale = rng.gen_range(0.5..2.0);
        let x: DMatrix<f64> = scale * q_thin.transpose(); // d x n
        let z = sparse_matrix(p, n, &mut rng);
        let xm = DataMatrix::new(x.clone()).unwrap();
        let zm = CoefficientMatrix::new(z.clone()).unwrap();
        let t_prev = init_transform(p, d, 7000 + seed).unwrap().matrix().clone();
        let t_new = transform_closed_form(&xm, &zm, lambda).unwrap();
        let f_prev = smooth_objective(&t_prev, &x, &z, lambda);
        let f_new = smooth_objective(&t_new, &x, &z, lambda);
        assert!(
            f_new < f_prev,
            "seed {seed}: no descent ({f_prev} -> {f_new})"
        );
        let g_new = fd_gradient_norm(&t_new, &x, &z, lambda);
        let g_prev = fd_gradient_norm(&t_prev, &x, &z, lambda);
        let ratio = g_new / g_prev.max(f64::MIN_POSITIVE);
        worst_ratio = worst_ratio.max(ratio);
        assert!(
            ratio <= 1e-4,
            "seed {seed}: finite-difference gradient ratio {ratio} \
             (|g_new| = {g_new:.3e}, |g_start| = {g_prev:.3e})"
        );
    }
    // generic (anisotropic) data: the formula still descends
    for seed in 0..10u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(380 + seed);
        let x = DMatrix::from_fn(d, n, |_, _| StandardNormal.sample(&mut rng));
        let z = sparse_matrix(p, n, &mut rng);
        let xm = DataMatrix::new(x.clone()).unwrap();
        let zm = CoefficientMatrix::new(z.clone()).unwrap();
        let t_prev = init_transform(p, d, 7500 + seed).unwrap().matrix().clone();
        let t_new = transform_closed_form(&xm, &zm, lambda).unwrap();
        let f_prev = smooth_objective(&t_prev, &x, &z, lambda);
        let f_new = smooth_objective(&t_new, &x, &z, lambda);
        assert!(
            f_new < f_prev,
            "seed {seed}: no descent on generic data ({f_prev} -> {f_new})"
        );
    }
    let elapsed = start.elapsed();
    println!(
        "criterion 3b: PASS - rectangular update descends (20 seeds) and is stationary on \
         isotropic data (worst finite-difference gradient ratio = {worst_ratio:.3e})"
    );
    assert_within_budget(elapsed, Duration::from_secs(30), "criterion 3b");
}

// ---------------------------------------------------------------------------
// criterion 4: scalar transform fixture
// ---------------------------------------------------------------------------

#[test]
fn criterion_04_scalar_transform_fixture() {
    let x = DataMatrix::new(DMatrix::from_element(1, 1, 1.0)).unwrap();
    let z = CoefficientMatrix::new(DMatrix::from_element(1, 1, 1.0)).unwrap();
    let t = transform_closed_form(&x, &z, 0.1).unwrap()[(0, 0)];
    assert!(
        (t - 0.95660).abs() <= 1e-4,
        "scalar fixture: got {t}, expected 0.95660 within 1e-4"
    );
    println!("criterion 4: PASS - scalar closed form = {t:.10} (expected 0.95660 within 1e-4)");
}

// ---------------------------------------------------------------------------
// criterion 5: joint objective descends per sub-update
// ---------------------------------------------------------------------------

#[test]
fn criterion_05_training_objective_descends_per_subupdate() {
    let start = Instant::now();
    let mut total_steps = 0usize;
    for seed in 0..20u64 {
        let data = synth_dataset(20, 4, 100, 0.05, 500 + seed).unwrap();
        let hp = Hyperparams {
            atoms: 10,
            seed,
            ..Hyperparams::default()
        };
        let mut observed: Vec<(LctlStep, usize, f64)> = Vec::new();
        let mut obs = |step: LctlStep, iter: usize, value: f64| {
            observed.push((step, iter, value));
        };
        let (_, report) =
            train_lctl_observed(&data.features, &data.labels, &hp, Some(&mut obs)).unwrap();
        // trace: non-increasing within relative slack
        for w in report.objective_trace.windows(2) {
            assert!(
                w[1] <= w[0] * (1.0 + 1e-6),
                "seed {seed}: trace rose {} -> {}",
                w[0],
                w[1]
            );
        }
        // every single sub-update: non-increasing within relative slack
        for pair in observed.windows(2) {
            let (prev_step, prev_iter, prev) = &pair[0];
            let (step, iter, value) = &pair[1];
            assert!(
                *value <= prev * (1.0 + 1e-6),
                "seed {seed}: objective rose {prev} -> {value} \
                 between {prev_step:?}@{prev_iter} and {step:?}@{iter}"
            );
        }
        total_steps += observed.len();
    }
    assert_within_budget(start.elapsed(), Duration::from_secs(60), "criterion 5");
    println!(
        "criterion 5: PASS - joint objective non-increasing across every sub-update \
         on 20 seeds ({total_steps} observed values)"
    );
}

// ---------------------------------------------------------------------------
// criterion 6: synthetic classification accuracy
// ---------------------------------------------------------------------------

fn train_and_score(noise: f64, seed: u64) -> (f64, f64) {
    let data = synth_dataset(20, 4, 100, noise, 600 + seed).unwrap();
    let labels = data.labels.class_indices();
    let spec = SplitSpec {
        mode: SplitMode::Fraction {
            fraction: 0.5,
            floor: 1,
        },
        seed,
    };
    let (train_idx, test_idx) = split(&labels, &spec).unwrap();
    let x_train = data.features.select_samples(&train_idx).unwrap();
    let q_train = data.labels.select_samples(&train_idx).unwrap();
    let x_test = data.features.select_samples(&test_idx).unwrap();
    let hp = Hyperparams {
        atoms: 10,
        seed,
        ..Hyperparams::default()
    };
    let (model, _) = train_lctl(&x_train, &q_train, &hp).unwrap();
    let preds = predict_batch(&model, &x_test).unwrap();
    let y_pred: Vec<usize> = preds.iter().map(|p| p.class_index).collect();
    let y_true: Vec<usize> = test_idx.iter().map(|&i| labels[i]).collect();
    let cm = confusion_matrix(&y_true, &y_pred, 4).unwrap();
    (overall_accuracy(&cm).unwrap(), kappa(&cm).unwrap())
}

#[test]
fn criterion_06_synthetic_classification_recovers_classes() {
    let start = Instant::now();
    let mut min_noisy_acc = 1.0_f64;
    let mut min_noisy_kappa = 1.0_f64;
    for seed in 0..5u64 {
        let (acc_clean, _) = train_and_score(0.0, seed);
        assert_eq!(
            acc_clean, 1.0,
            "seed {seed}: noiseless held-out accuracy {acc_clean} != 1.0"
        );
        let (acc_noisy, kappa_noisy) = train_and_score(0.05, seed);
        min_noisy_acc = min_noisy_acc.min(acc_noisy);
        min_noisy_kappa = min_noisy_kappa.min(kappa_noisy);
        assert!(
            acc_noisy >= 0.95,
            "seed {seed}: noisy accuracy {acc_noisy} < 0.95"
        );
        assert!(
            kappa_noisy >= 0.90,
            "seed {seed}: noisy kappa {kappa_noisy} < 0.90"
        );
    }
    assert_within_budget(start.elapsed(), Duration::from_secs(60), "criterion 6");
    println!(
        "criterion 6: PASS - noiseless accuracy 100% on 5 seeds; noisy accuracy >= \
         {:.1}% and kappa >= {:.3}",
        min_noisy_acc * 100.0,
        min_noisy_kappa
    );
}

// ---------------------------------------------------------------------------
// criterion 7: metric fixtures
// ---------------------------------------------------------------------------

#[test]
fn criterion_07_metric_fixtures_are_exact() {
    let cm = ConfusionMatrix::from_rows(&[vec![8, 2], vec![4, 6]]).unwrap();
    let oa = overall_accuracy(&cm).unwrap();
    assert!((oa - 0.70).abs() <= 1e-12, "OA {oa}");
    let aa = average_accuracy(&cm).unwrap();
    assert!((aa - 0.70).abs() <= 1e-12, "AA {aa}");

    let cm_k = ConfusionMatrix::from_rows(&[vec![40, 10], vec![5, 45]]).unwrap();
    let k = kappa(&cm_k).unwrap();
    assert!((k - 0.70).abs() <= 1e-12, "kappa {k}");

    // uniform confusion: agreement is pure chance
    let cm_u = ConfusionMatrix::from_rows(&[vec![7, 7], vec![7, 7]]).unwrap();
    assert_eq!(kappa(&cm_u).unwrap(), 0.0);

    // single diagonal cell: degenerate marginals, kappa defined as 1
    let cm_d = ConfusionMatrix::from_rows(&[vec![9, 0], vec![0, 0]]).unwrap();
    assert_eq!(kappa(&cm_d).unwrap(), 1.0);

    println!(
        "criterion 7: PASS - OA/AA/kappa fixtures exact within 1e-12 \
         (OA = {oa}, AA = {aa}, kappa = {k})"
    );
}

// ---------------------------------------------------------------------------
// criterion 8: subspace counting
// ---------------------------------------------------------------------------

#[test]
fn criterion_08_subspace_counts() {
    let counts = subspace_counts(700, 50, 700).unwrap();
    let rounded = counts.synthesis.ceil() as u64;
    assert_eq!(
        rounded, 191,
        "synthesis count {} rounds to {rounded}, expected 191",
        counts.synthesis
    );
    assert_eq!(counts.analysis, 700);
    println!(
        "criterion 8: PASS - synthesis count {:.4} rounds up to 191; analysis count 700",
        counts.synthesis
    );
}

// ---------------------------------------------------------------------------
// criterion 9: inference cost independent of training-set size
// ---------------------------------------------------------------------------

fn median_predict_time(model: &lctl::LctlModel, x: &DataMatrix) -> Duration {
    let mut times = Vec::new();
    for _ in 0..5 {
        let t0 = Instant::now();
        let preds = predict_batch(model, x).unwrap();
        let dt = t0.elapsed();
        assert_eq!(preds.len(), x.sample_count());
        times.push(dt);
    }
    times.sort();
    times[times.len() / 2]
}

#[test]
fn criterion_09_inference_cost_ignores_training_set_size() {
    let (d, c, p) = (200usize, 4usize, 40usize);
    let hp = Hyperparams {
        atoms: p,
        max_outer: 2,
        seed: 0,
        ..Hyperparams::default()
    };
    // identical architecture, training sets 100x apart
    let small = synth_dataset(d, c, 15, 0.05, 901).unwrap();
    let large = synth_dataset(d, c, 1500, 0.05, 902).unwrap();
    let (model_small, _) = train_lctl(&small.features, &small.labels, &hp).unwrap();
    let (model_large, _) = train_lctl(&large.features, &large.labels, &hp).unwrap();

    let mut rng = ChaCha20Rng::seed_from_u64(903);
    let x_test = DataMatrix::new(DMatrix::from_fn(d, 10_000, |_, _| {
        StandardNormal.sample(&mut rng)
    }))
    .unwrap();

    let t_small = median_predict_time(&model_small, &x_test);
    let t_large = median_predict_time(&model_large, &x_test);
    let ratio = t_small.as_secs_f64().max(t_large.as_secs_f64())
        / t_small.as_secs_f64().min(t_large.as_secs_f64()).max(1e-12);
    assert!(
        ratio < 2.0,
        "per-sample time ratio {ratio} across 100x training sizes \
         ({t_small:?} vs {t_large:?})"
    );
    let budget = Duration::from_secs(1);
    assert!(
        t_small < budget && t_large < budget,
        "10k predictions took {t_small:?} / {t_large:?}, budget {budget:?}"
    );
    println!(
        "criterion 9: PASS - 10k predictions in {t_small:?} (N = 60) vs {t_large:?} \
         (N = 6000), ratio {ratio:.3} < 2"
    );
}

// ---------------------------------------------------------------------------
// criterion 10: bit-identical artifacts for identical seeds
// ---------------------------------------------------------------------------

fn artifact_bytes(dir: &std::path::Path, tag: &str) -> (Vec<u8>, String, Vec<u8>) {
    let data = synth_dataset(15, 3, 30, 0.03, 7).unwrap();
    let labels = data.labels.class_indices();
    let spec = SplitSpec {
        mode: SplitMode::Fraction {
            fraction: 0.5,
            floor: 1,
        },
        seed: 7,
    };
    let (train_idx, test_idx) = split(&labels, &spec).unwrap();
    let x_train = data.features.select_samples(&train_idx).unwrap();
    let q_train = data.labels.select_samples(&train_idx).unwrap();
    let x_test = data.features.select_samples(&test_idx).unwrap();
    let hp = Hyperparams {
        atoms: 8,
        seed: 7,
        max_outer: 10,
        ..Hyperparams::default()
    };
    let (model, _) = train_lctl(&x_train, &q_train, &hp).unwrap();
    let model_path = dir.join(format!("model-{tag}.json"));
    lctl::data::model_file::save_model(&model, &model_path).unwrap();
    let model_bytes = std::fs::read(&model_path).unwrap();

    let preds = predict_batch(&model, &x_test).unwrap();
    let mut pred_text = String::new();
    for (i, p) in preds.iter().enumerate() {
        pred_text.push_str(&format!("{i},{}", p.class_index + 1));
        for s in &p.scores {
            pred_text.push_str(&format!(",{s}"));
        }
        pred_text.push('\n');
    }

    let y_true: Vec<usize> = test_idx.iter().map(|&i| labels[i]).collect();
    let y_pred: Vec<usize> = preds.iter().map(|p| p.class_index).collect();
    let cm = confusion_matrix(&y_true, &y_pred, 3).unwrap();
    let report = MetricsReport::from_confusion(&cm, None).unwrap();
    let metrics_bytes = serde_json::to_vec_pretty(&report).unwrap();
    (model_bytes, pred_text, metrics_bytes)
}

#[test]
fn criterion_10_identical_seeds_give_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (model_a, preds_a, metrics_a) = artifact_bytes(dir.path(), "a");
    let (model_b, preds_b, metrics_b) = artifact_bytes(dir.path(), "b");
    assert_eq!(
        model_a, model_b,
        "model files differ between identical runs"
    );
    assert_eq!(
        preds_a, preds_b,
        "predictions differ between identical runs"
    );
    assert_eq!(
        metrics_a, metrics_b,
        "metrics differ between identical runs"
    );
    println!(
        "criterion 10: PASS - model / prediction / metric artifacts byte-identical across \
         two identically-seeded runs ({} model bytes)",
        model_a.len()
    );
}

// ---------------------------------------------------------------------------
// criterion 11: real-cube benchmark (runs only when the data is present)
// ---------------------------------------------------------------------------

#[test]
fn criterion_11_real_cube_benchmark_when_available() {
    let dir = match std::env::var("LCTL_INDIAN_PINES_DIR") {
        Ok(dir) => std::path::PathBuf::from(dir),
        Err(_) => {
            println!(
                "criterion 11: SKIP - set LCTL_INDIAN_PINES_DIR to a directory with \
                 header.json, data.raw, gt.csv to run the real-cube benchmark"
            );
            return;
        }
    };
    let start = Instant::now();
    let set = lctl::data::cube::load_cube(
        dir.join("header.json"),
        dir.join("data.raw"),
        dir.join("gt.csv"),
    )
    .unwrap();
    let spec = SplitSpec {
        mode: SplitMode::Fraction {
            fraction: 0.1,
            floor: 15,
        },
        seed: 1,
    };
    let (train_idx, test_idx) = split(&set.labels, &spec).unwrap();
    let classes = set.labels.iter().max().unwrap() + 1;
    let x_train = set.features.select_samples(&train_idx).unwrap();
    let train_labels: Vec<usize> = train_idx.iter().map(|&i| set.labels[i]).collect();
    let q_train = LabelMatrix::from_indices(&train_labels, classes).unwrap();
    let hp = Hyperparams {
        atoms: 40,
        seed: 1,
        ..Hyperparams::default()
    };
    let (model, report) = train_lctl(&x_train, &q_train, &hp).unwrap();
    let x_test = set.features.select_samples(&test_idx).unwrap();
    let preds = predict_batch(&model, &x_test).unwrap();
    let y_pred: Vec<usize> = preds.iter().map(|p| p.class_index).collect();
    let y_true: Vec<usize> = test_idx.iter().map(|&i| set.labels[i]).collect();
    let cm = confusion_matrix(&y_true, &y_pred, classes).unwrap();
    let oa = overall_accuracy(&cm).unwrap();
    let k = kappa(&cm).unwrap();
    assert!(oa >= 0.70, "overall accuracy {oa} < 0.70");
    assert!(k >= 0.60, "kappa {k} < 0.60");
    println!(
        "criterion 11: PASS - real cube: OA = {:.2}%, kappa = {:.4}, {} outer iterations, \
         {:?} total",
        oa * 100.0,
        k,
        report.outer_iterations,
        start.elapsed()
    );
}
