//! Run manifests: a JSON sidecar written next to every artifact so any run
//! can be replayed or audited later.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::commands::CliError;

/// SHA-256 digest of one input file.
#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to reproduce a run: the command, its resolved flags,
/// the seed, digests of every input file, the tool version, and how long
/// the run took. Wall time is informational and is the only field expected
/// to differ between identical runs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub flags: serde_json::Value,
    pub seed: Option<u64>,
    pub inputs: Vec<InputDigest>,
    pub tool_version: String,
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn new(
        command: &str,
        flags: serde_json::Value,
        seed: Option<u64>,
        input_paths: &[PathBuf],
        started: Instant,
    ) -> Result<Self, CliError> {
        let mut inputs = Vec::with_capacity(input_paths.len());
        for path in input_paths {
            inputs.push(digest_file(path)?);
        }
        Ok(RunManifest {
            command: command.to_string(),
            flags,
            seed,
            inputs,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_seconds: started.elapsed().as_secs_f64(),
        })
    }

    /// Writes the manifest to `<artifact>.manifest.json` and returns that
    /// path.
    pub fn write_for(&self, artifact: &Path) -> Result<PathBuf, CliError> {
        let path = path_with_suffix(artifact, ".manifest.json");
        let text = serde_json::to_string_pretty(self).expect("manifest structs always serialize");
        fs::write(&path, text + "\n").map_err(lctl::Error::from)?;
        Ok(path)
    }
}

/// Appends `suffix` to a path without touching its existing extension.
pub fn path_with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn digest_file(path: &Path) -> Result<InputDigest, CliError> {
    let mut file = fs::File::open(path).map_err(lctl::Error::from)?;
    let mut hasher = Sha256::new();
    std::io::copy(&mut file, &mut hasher).map_err(lctl::Error::from)?;
    let hash = hasher.finalize();
    let sha256 = hash.iter().map(|b| format!("{b:02x}")).collect();
    Ok(InputDigest {
        path: path.display().to_string(),
        sha256,
    })
}
