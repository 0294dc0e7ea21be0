//! File formats and dataset generation.
//!
//! Numbering convention at every file boundary: class labels are 1-based
//! on disk, with 0 reserved for unlabeled pixels in ground-truth grids;
//! in memory everything is 0-based. The loaders and savers in this module
//! are the only code that converts between the two.

pub mod csv;
pub mod cube;
pub mod model_file;
pub mod ppm;
pub mod split;
pub mod synth;
