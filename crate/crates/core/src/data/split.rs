//! Stratified train/test splitting.
//!
//! Sampling is per class: each class's sample indices are shuffled with a
//! seeded generator and the first `k` go to the training set. Every class
//! must keep at least one test sample, so `k` is capped at the class
//! population minus one.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};

/// How many training samples to draw from each class.
#[derive(Debug, Clone, PartialEq)]
pub enum SplitMode {
    /// Take `round(fraction * population)` per class, but never fewer than
    /// `floor` and never more than `population - 1`.
    Fraction { fraction: f64, floor: usize },
    /// Take an explicit count per class; entry `i` applies to 0-based
    /// class `i`.
    PerClassCounts { counts: Vec<usize> },
}

/// A complete split request: the per-class rule plus the shuffle seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitSpec {
    pub mode: SplitMode,
    pub seed: u64,
}

/// Splits 0-based `labels` into (train, test) sample-index lists.
///
/// Both lists come back sorted ascending; together they partition
/// `0..labels.len()`. Classes are `0..=max(labels)`; a class that never
/// appears (or cannot satisfy the rule while keeping a test sample) is a
/// [`Error::ClassTooSmall`].
pub fn split(labels: &[usize], spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    if labels.is_empty() {
        return Err(Error::InvalidArgs("label list is empty".into()));
    }
    let classes = labels.iter().max().expect("non-empty") + 1;
    match &spec.mode {
        SplitMode::Fraction { fraction, floor } => {
            if !(fraction.is_finite() && *fraction > 0.0 && *fraction < 1.0) {
                return Err(Error::InvalidArgs(format!(
                    "fraction must be in (0, 1), got {fraction}"
                )));
            }
            if *floor == 0 {
                return Err(Error::InvalidArgs("floor must be >= 1".into()));
            }
        }
        SplitMode::PerClassCounts { counts } => {
            if counts.len() != classes {
                return Err(Error::LengthMismatch(format!(
                    "{} per-class counts for {} classes",
                    counts.len(),
                    classes
                )));
            }
            if counts.contains(&0) {
                return Err(Error::InvalidArgs(
                    "per-class counts must all be >= 1".into(),
                ));
            }
        }
    }

    let mut per_class: Vec<Vec<usize>> = vec![Vec::new(); classes];
    for (i, &label) in labels.iter().enumerate() {
        per_class[label].push(i);
    }

    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, pool) in per_class.iter_mut().enumerate() {
        let population = pool.len();
        let take = match &spec.mode {
            SplitMode::Fraction { fraction, floor } => {
                if population < 2 {
                    return Err(Error::ClassTooSmall {
                        class: class + 1,
                        population,
                    });
                }
                let by_fraction = (fraction * population as f64).round() as usize;
                by_fraction.max(*floor).min(population - 1)
            }
            SplitMode::PerClassCounts { counts } => {
                let want = counts[class];
                // want >= 1 was validated; also keep >= 1 test sample
                if population < want + 1 {
                    return Err(Error::ClassTooSmall {
                        class: class + 1,
                        population,
                    });
                }
                want
            }
        };
        pool.shuffle(&mut rng);
        train.extend_from_slice(&pool[..take]);
        test.extend_from_slice(&pool[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}
