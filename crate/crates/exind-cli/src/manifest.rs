//! Run manifests: every output directory records what produced it.

use std::path::Path;

use serde::Serialize;

/// Reproducibility record written alongside every output set. Re-running the
/// recorded subcommand with the recorded parameters reproduces the outputs
/// byte-identically; only the timestamp differs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub tool_version: String,
    pub timestamp_utc: String,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: serde_json::Value, seeds: Vec<u64>) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_utc: chrono::Utc::now().to_rfc3339(),
            parameters,
            seeds,
            outputs: Vec::new(),
        }
    }

    /// Record output files (paths relative to the manifest's directory).
    pub fn with_outputs(mut self, outputs: impl IntoIterator<Item = String>) -> Self {
        self.outputs = outputs.into_iter().collect();
        self.outputs.sort();
        self
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        std::fs::write(path, serde_json::to_vec_pretty(self)?)?;
        Ok(())
    }
}

/// File names relative to a base directory.
pub fn relative_names(base: &Path, paths: &[std::path::PathBuf]) -> Vec<String> {
    paths
        .iter()
        .map(|p| {
            p.strip_prefix(base)
                .unwrap_or(p)
                .to_string_lossy()
                .into_owned()
        })
        .collect()
}
