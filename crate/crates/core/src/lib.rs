//! Sparsifying transform learning with a label-consistent extension.
//!
//! The model couples three pieces trained jointly by alternating
//! minimization:
//!
//! * a wide transform `T` (`p x d`) that maps signals to nearly sparse
//!   codes, regularized by `|T|_F^2 - log det T` so it can neither blow up
//!   nor collapse;
//! * sparse codes `Z` obtained by shrinkage (unsupervised) or by a stacked
//!   proximal solver that also pulls codes toward their labels
//!   (supervised);
//! * a linear map `M` from codes to one-hot label space, fit by ridge
//!   least squares.
//!
//! At test time a sample is classified with two matrix-vector products and
//! one shrink: `argmax M shrink(T x)` — the cost is independent of the
//! training set size.
//!
//! Modules:
//!
//! * [`model`] — validated core types (matrices, hyperparameters, models).
//! * [`prox`] — shrinkage and the stacked proximal coefficient solvers.
//! * [`transform`] — closed-form transform update and objectives.
//! * [`trainer`] — alternating training loops and the classifier update.
//! * [`classifier`] — test-time encoding and prediction.
//! * [`metrics`] — confusion-matrix metrics and subspace counting.
//! * [`data`] — file formats (CSV, raw cubes, model JSON, PPM maps),
//!   splitting, and synthetic data.

pub mod classifier;
pub mod data;
pub mod error;
pub mod metrics;
pub mod model;
pub mod prox;
pub mod trainer;
pub mod transform;

pub use error::{Error, Result};
pub use model::{
    CoefficientMatrix, DataMatrix, Hyperparams, IstaReport, LabelMatrix, LctlModel, Prediction,
    ThresholdConvention, TrainReport, TransformModel,
};
