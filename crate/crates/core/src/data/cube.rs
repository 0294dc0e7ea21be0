//! Hyperspectral cube loading.
//!
//! A cube is described by three files: a JSON header (dimensions and
//! layout), a raw binary file of little-endian `f32` samples in
//! band-interleaved-by-pixel order, and a ground-truth grid of integer
//! labels (CSV rows, `0` meaning unlabeled). Loading keeps only the
//! labeled pixels, each becoming one feature column with its band values
//! widened to `f64`.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::DataMatrix;

/// JSON header describing the raw cube layout.
#[derive(Debug, Clone, Deserialize)]
pub struct CubeHeader {
    pub height: usize,
    pub width: usize,
    pub bands: usize,
    pub dtype: String,
    pub interleave: String,
    pub byte_order: String,
}

impl CubeHeader {
    fn validate(&self) -> Result<()> {
        if self.height == 0 || self.width == 0 || self.bands == 0 {
            return Err(Error::HeaderInvalid(format!(
                "dimensions must all be >= 1, got {}x{}x{}",
                self.height, self.width, self.bands
            )));
        }
        if self.dtype != "f32" {
            return Err(Error::HeaderInvalid(format!(
                "unsupported dtype {:?}, expected \"f32\"",
                self.dtype
            )));
        }
        if self.interleave != "bip" {
            return Err(Error::HeaderInvalid(format!(
                "unsupported interleave {:?}, expected \"bip\"",
                self.interleave
            )));
        }
        if self.byte_order != "little" {
            return Err(Error::HeaderInvalid(format!(
                "unsupported byte order {:?}, expected \"little\"",
                self.byte_order
            )));
        }
        Ok(())
    }
}

/// Labeled pixels extracted from a cube, ready for training or prediction.
#[derive(Debug, Clone)]
pub struct LabeledPixelSet {
    /// `bands x N` features, one column per labeled pixel in row-major
    /// grid order.
    pub features: DataMatrix,
    /// 0-based class index per pixel, aligned with the feature columns.
    pub labels: Vec<usize>,
    /// `(row, col)` grid position per pixel, aligned with the columns.
    pub coords: Vec<(usize, usize)>,
    /// `(height, width)` of the full image grid.
    pub image_dims: (usize, usize),
    /// Display names, one per class: the 1-based class numbers.
    pub class_names: Vec<String>,
}

/// Loads the labeled pixels of a cube given its three files.
pub fn load_cube(
    header_path: impl AsRef<Path>,
    data_path: impl AsRef<Path>,
    gt_path: impl AsRef<Path>,
) -> Result<LabeledPixelSet> {
    let header_text = fs::read_to_string(header_path.as_ref())?;
    let header: CubeHeader =
        serde_json::from_str(&header_text).map_err(|e| Error::HeaderInvalid(e.to_string()))?;
    header.validate()?;

    let bytes = fs::read(data_path.as_ref())?;
    let expected = (header.height * header.width * header.bands) as u64 * 4;
    if bytes.len() as u64 != expected {
        return Err(Error::SizeMismatch {
            expected,
            found: bytes.len() as u64,
        });
    }

    let grid = load_gt_grid(gt_path.as_ref(), &header)?;

    let mut labels = Vec::new();
    let mut coords = Vec::new();
    for (r, row) in grid.iter().enumerate() {
        for (c, &value) in row.iter().enumerate() {
            if value > 0 {
                labels.push((value - 1) as usize);
                coords.push((r, c));
            }
        }
    }
    if labels.is_empty() {
        return Err(Error::InvalidArgs(
            "ground truth contains no labeled pixels".into(),
        ));
    }
    let classes = labels.iter().max().expect("non-empty") + 1;

    let n = labels.len();
    let mut features = DMatrix::zeros(header.bands, n);
    for (j, &(r, c)) in coords.iter().enumerate() {
        let pixel_offset = (r * header.width + c) * header.bands * 4;
        for b in 0..header.bands {
            let at = pixel_offset + b * 4;
            let raw: [u8; 4] = bytes[at..at + 4]
                .try_into()
                .expect("slice is exactly 4 bytes");
            features[(b, j)] = f32::from_le_bytes(raw) as f64;
        }
    }

    Ok(LabeledPixelSet {
        features: DataMatrix::new(features)?,
        labels,
        coords,
        image_dims: (header.height, header.width),
        class_names: (1..=classes).map(|i| i.to_string()).collect(),
    })
}

/// Loads only a ground-truth grid and returns the 0-based class label of
/// every labeled pixel in row-major order — the same ordering
/// [`load_cube`] gives the feature columns, so splits computed from these
/// labels line up with cube features.
///
/// No header is needed; rows just have to agree on their width.
pub fn load_gt_labels(gt_path: impl AsRef<Path>) -> Result<Vec<usize>> {
    let text = fs::read_to_string(gt_path.as_ref())?;
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row_len = 0usize;
        for field in line.split(',') {
            let field = field.trim();
            let value: u64 = field.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("expected an integer ground-truth label, found {field:?}"),
            })?;
            if value > 0 {
                labels.push((value - 1) as usize);
            }
            row_len += 1;
        }
        match width {
            None => width = Some(row_len),
            Some(w) if w != row_len => {
                return Err(Error::RaggedRows {
                    line: idx + 1,
                    expected: w,
                    found: row_len,
                });
            }
            _ => {}
        }
    }
    if labels.is_empty() {
        return Err(Error::InvalidArgs(
            "ground truth contains no labeled pixels".into(),
        ));
    }
    Ok(labels)
}

fn load_gt_grid(path: &Path, header: &CubeHeader) -> Result<Vec<Vec<u64>>> {
    let text = fs::read_to_string(path)?;
    let mut grid: Vec<Vec<u64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut row = Vec::with_capacity(header.width);
        for field in line.split(',') {
            let field = field.trim();
            let value: u64 = field.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("expected an integer ground-truth label, found {field:?}"),
            })?;
            row.push(value);
        }
        if row.len() != header.width {
            return Err(Error::GroundTruthDimsMismatch {
                gt_height: grid.len() + 1,
                gt_width: row.len(),
                height: header.height,
                width: header.width,
            });
        }
        grid.push(row);
    }
    if grid.len() != header.height {
        return Err(Error::GroundTruthDimsMismatch {
            gt_height: grid.len(),
            gt_width: header.width,
            height: header.height,
            width: header.width,
        });
    }
    Ok(grid)
}
