//! Run manifests: what was run, with which config, and what it produced.

use std::path::Path;

use bmoforge::analysis::SummaryRow;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, ExperimentKind};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST_FILE: &str = "manifest.json";

/// A fitted slope with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeRecord {
    pub name: String,
    pub slope: f64,
    pub stderr: f64,
}

/// A value that must land in `[low, high]`. Non-finite numbers are stored as
/// `None` so the manifest stays valid JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandResult {
    pub name: String,
    pub value: Option<f64>,
    pub low: Option<f64>,
    pub high: Option<f64>,
    pub met: bool,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl BandResult {
    pub fn new(name: impl Into<String>, value: f64, low: f64, high: f64) -> Self {
        Self {
            name: name.into(),
            value: finite(value),
            low: finite(low),
            high: finite(high),
            met: value >= low && value <= high,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub kind: ExperimentKind,
    pub config_hash: String,
    pub tool_version: String,
    pub seed: u64,
    pub started: String,
    pub finished: String,
    /// Output files, relative to the manifest's directory.
    pub outputs: Vec<String>,
    pub violations: usize,
    pub summary: Vec<SummaryRow>,
    pub slopes: Vec<SlopeRecord>,
    pub bands: Vec<BandResult>,
    /// Hypotheses taken on trust rather than checked.
    pub assertions: Vec<String>,
    pub passed: bool,
    pub config: serde_json::Value,
}

/// Hex SHA-256 of the canonical JSON form of the config.
pub fn config_hash(config: &ExperimentConfig) -> String {
    hex::encode(Sha256::digest(config.canonical_json().as_bytes()))
}

pub fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(std::io::Error::other)?;
        std::fs::write(dir.join(MANIFEST_FILE), text + "\n")
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }
}
