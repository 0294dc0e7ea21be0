//! Shared dataset flags: either a CSV pair (`--features` / `--labels`) or
//! a cube trio (`--cube-header` / `--cube-data` / `--gt`).

use std::path::PathBuf;

use lctl::data::csv::load_labels_csv;
use lctl::data::csv::load_matrix_csv;
use lctl::data::cube::load_cube;
use lctl::DataMatrix;

use crate::commands::CliError;

#[derive(Debug, clap::Args)]
pub struct DataArgs {
    /// Feature CSV with one sample per row
    #[arg(long, value_name = "FILE")]
    pub features: Option<PathBuf>,

    /// Label CSV with one 1-based class label per line (0 is reserved for
    /// unlabeled and rejected)
    #[arg(long, value_name = "FILE")]
    pub labels: Option<PathBuf>,

    /// Cube header JSON; requires --cube-data and --gt
    #[arg(long, value_name = "FILE")]
    pub cube_header: Option<PathBuf>,

    /// Raw cube payload (little-endian f32, band-interleaved by pixel)
    #[arg(long, value_name = "FILE")]
    pub cube_data: Option<PathBuf>,

    /// Ground-truth grid CSV (0 = unlabeled); picks the labeled pixels in
    /// row-major order
    #[arg(long, value_name = "FILE")]
    pub gt: Option<PathBuf>,
}

/// A dataset in memory plus everything the manifest needs.
pub struct LoadedData {
    pub features: DataMatrix,
    /// 0-based class indices, present when labels were supplied.
    pub labels: Option<Vec<usize>>,
    /// Pixel grid positions (cube mode only).
    pub coords: Option<Vec<(usize, usize)>>,
    /// `(height, width)` of the source image (cube mode only).
    pub image_dims: Option<(usize, usize)>,
    /// The files that were read, for manifest digests.
    pub inputs: Vec<PathBuf>,
}

impl DataArgs {
    /// Loads whichever dataset style the flags describe.
    pub fn load(&self, require_labels: bool) -> Result<LoadedData, CliError> {
        let cube_flags = [&self.cube_header, &self.cube_data, &self.gt]
            .iter()
            .filter(|f| f.is_some())
            .count();
        if cube_flags > 0 {
            if cube_flags < 3 {
                return Err(CliError::Usage(
                    "cube input needs all of --cube-header, --cube-data, and --gt".into(),
                ));
            }
            if self.features.is_some() || self.labels.is_some() {
                return Err(CliError::Usage(
                    "choose either CSV input (--features/--labels) or cube input \
                     (--cube-header/--cube-data/--gt), not both"
                        .into(),
                ));
            }
            let header = self.cube_header.clone().expect("checked above");
            let data = self.cube_data.clone().expect("checked above");
            let gt = self.gt.clone().expect("checked above");
            let set = load_cube(&header, &data, &gt)?;
            log::info!(
                "loaded cube: {} bands x {} labeled pixels from a {}x{} grid",
                set.features.feature_count(),
                set.features.sample_count(),
                set.image_dims.0,
                set.image_dims.1
            );
            return Ok(LoadedData {
                features: set.features,
                labels: Some(set.labels),
                coords: Some(set.coords),
                image_dims: Some(set.image_dims),
                inputs: vec![header, data, gt],
            });
        }

        let features_path = self.features.clone().ok_or_else(|| {
            CliError::Usage("no input given: pass --features (CSV mode) or the cube flags".into())
        })?;
        let features = load_matrix_csv(&features_path)?;
        log::info!(
            "loaded CSV features: {} x {}",
            features.feature_count(),
            features.sample_count()
        );
        let mut inputs = vec![features_path];
        let labels = match &self.labels {
            Some(path) => {
                let labels = load_labels_csv(path)?;
                if labels.len() != features.sample_count() {
                    return Err(CliError::Core(lctl::Error::LengthMismatch(format!(
                        "{} labels for {} samples",
                        labels.len(),
                        features.sample_count()
                    ))));
                }
                inputs.push(path.clone());
                Some(labels)
            }
            None => {
                if require_labels {
                    return Err(CliError::Usage(
                        "this command needs labels: pass --labels (CSV mode) or use cube input"
                            .into(),
                    ));
                }
                None
            }
        };
        Ok(LoadedData {
            features,
            labels,
            coords: None,
            image_dims: None,
            inputs,
        })
    }
}
