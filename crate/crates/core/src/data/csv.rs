//! Plain-text loaders and savers: feature tables, label lists, and index
//! lists.
//!
//! Feature CSVs store one sample per row; the in-memory convention is one
//! sample per column, so loading transposes. Floats are written with the
//! shortest representation that round-trips, so save/load is lossless.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::model::DataMatrix;

/// Loads a comma-separated feature table (one sample per row) into a
/// `d x N` matrix. Blank lines are skipped.
pub fn load_matrix_csv(path: impl AsRef<Path>) -> Result<DataMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(width);
        for field in line.split(',') {
            let field = field.trim();
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("expected a number, found {field:?}"),
            })?;
            row.push(value);
        }
        if rows.is_empty() {
            width = row.len();
        } else if row.len() != width {
            return Err(Error::RaggedRows {
                line: idx + 1,
                expected: width,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile(path.display().to_string()));
    }
    let n = rows.len();
    let values = DMatrix::from_fn(width, n, |i, j| rows[j][i]);
    DataMatrix::new(values)
}

/// Saves a `d x N` matrix as a feature table with one sample per row.
pub fn save_matrix_csv(x: &DataMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for j in 0..x.sample_count() {
        for i in 0..x.feature_count() {
            if i > 0 {
                out.push(',');
            }
            // Display for f64 prints the shortest round-trip form
            let _ = write!(out, "{}", x.values()[(i, j)]);
        }
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

/// Loads a label file (one 1-based label per line) into 0-based indices.
pub fn load_labels_csv(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut labels = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let value: u64 = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("expected an integer label, found {line:?}"),
        })?;
        if value == 0 {
            return Err(Error::Parse {
                line: idx + 1,
                message: "labels are 1-based; 0 is reserved for unlabeled".into(),
            });
        }
        labels.push((value - 1) as usize);
    }
    if labels.is_empty() {
        return Err(Error::EmptyFile(path.display().to_string()));
    }
    Ok(labels)
}

/// Saves 0-based labels as a 1-based label file, one per line.
pub fn save_labels_csv(labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for &label in labels {
        let _ = writeln!(out, "{}", label + 1);
    }
    fs::write(path, out)?;
    Ok(())
}

/// Loads a sample-index file: one 0-based index per line.
pub fn load_indices(path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut indices = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let value: usize = line.parse().map_err(|_| Error::Parse {
            line: idx + 1,
            message: format!("expected a sample index, found {line:?}"),
        })?;
        indices.push(value);
    }
    if indices.is_empty() {
        return Err(Error::EmptyFile(path.display().to_string()));
    }
    Ok(indices)
}

/// Saves 0-based sample indices, one per line.
pub fn save_indices(indices: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for &index in indices {
        let _ = writeln!(out, "{index}");
    }
    fs::write(path, out)?;
    Ok(())
}
