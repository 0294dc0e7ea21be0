//! Classification-map rendering as binary PPM (P6).
//!
//! Each predicted pixel is painted with its class color from a fixed
//! 16-color palette (classes beyond 16 wrap around); pixels never
//! predicted stay black. PPM needs no external encoder and any common
//! image viewer opens it.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Fixed palette; entry `i` colors class index `i % 16`.
pub const CLASS_PALETTE: [[u8; 3]; 16] = [
    [230, 25, 75],   // red
    [60, 180, 75],   // green
    [255, 225, 25],  // yellow
    [0, 130, 200],   // blue
    [245, 130, 48],  // orange
    [145, 30, 180],  // purple
    [70, 240, 240],  // cyan
    [240, 50, 230],  // magenta
    [210, 245, 60],  // lime
    [250, 190, 212], // pink
    [0, 128, 128],   // teal
    [220, 190, 255], // lavender
    [170, 110, 40],  // brown
    [255, 250, 200], // beige
    [128, 0, 0],     // maroon
    [170, 255, 195], // mint
];

/// Paints `predictions[i]` at `coords[i]` on a `height x width` black
/// canvas and writes it to `path` as a P6 PPM with maxval 255.
pub fn render_map(
    predictions: &[usize],
    coords: &[(usize, usize)],
    image_dims: (usize, usize),
    path: impl AsRef<Path>,
) -> Result<()> {
    let (height, width) = image_dims;
    if height == 0 || width == 0 {
        return Err(Error::InvalidArgs(format!(
            "image dimensions must be >= 1, got {height}x{width}"
        )));
    }
    if predictions.len() != coords.len() {
        return Err(Error::LengthMismatch(format!(
            "{} predictions vs {} coordinates",
            predictions.len(),
            coords.len()
        )));
    }
    let mut pixels = vec![0u8; height * width * 3];
    for (&class, &(r, c)) in predictions.iter().zip(coords) {
        if r >= height || c >= width {
            return Err(Error::InvalidArgs(format!(
                "coordinate ({r}, {c}) outside {height}x{width} grid"
            )));
        }
        let color = CLASS_PALETTE[class % CLASS_PALETTE.len()];
        let at = (r * width + c) * 3;
        pixels[at..at + 3].copy_from_slice(&color);
    }
    let mut out = format!("P6\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(&pixels);
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_header_and_colored_pixels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.ppm");
        render_map(&[0, 1], &[(0, 1), (1, 0)], (2, 3), &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        let header = b"P6\n3 2\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        let body = &bytes[header.len()..];
        assert_eq!(body.len(), 2 * 3 * 3);
        // (0,0) untouched -> black
        assert_eq!(&body[0..3], &[0, 0, 0]);
        // (0,1) -> class 0 color
        assert_eq!(&body[3..6], &CLASS_PALETTE[0]);
        // (1,0) -> class 1 color
        assert_eq!(&body[9..12], &CLASS_PALETTE[1]);
    }

    #[test]
    fn classes_beyond_palette_wrap() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.ppm");
        render_map(&[16], &[(0, 0)], (1, 1), &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        let body = &bytes[b"P6\n1 1\n255\n".len()..];
        assert_eq!(body, &CLASS_PALETTE[0]);
    }

    #[test]
    fn rejects_out_of_grid_coordinates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.ppm");
        assert!(matches!(
            render_map(&[0], &[(2, 0)], (2, 2), &path),
            Err(Error::InvalidArgs(_))
        ));
    }

    #[test]
    fn rejects_length_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("map.ppm");
        assert!(matches!(
            render_map(&[0, 1], &[(0, 0)], (2, 2), &path),
            Err(Error::LengthMismatch(_))
        ));
    }

    #[test]
    fn render_is_byte_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.ppm");
        let b = dir.path().join("b.ppm");
        let preds = [0, 3, 7];
        let coords = [(0, 0), (1, 2), (2, 1)];
        render_map(&preds, &coords, (3, 3), &a).unwrap();
        render_map(&preds, &coords, (3, 3), &b).unwrap();
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
}
