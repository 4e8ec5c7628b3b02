use serde::{Deserialize, Serialize};

use crate::output::{sha256_hex, Table};

/// Provenance of one invocation. Timestamps and runtimes live only here,
/// never in the CSV files, so the data files stay byte-reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    pub command: String,
    /// SHA-256 of the config file bytes as read.
    pub config_sha256: String,
    /// Effective seed after any `--seed` override.
    pub master_seed: u64,
    pub threads: usize,
    pub started_at: String,
    pub finished_at: String,
    pub runtime_ms: f64,
    /// Per-`ε` setup and simulation time, `converge` only.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub record_runtime_ms: Vec<f64>,
    pub files: Vec<FileDigest>,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
    /// One digest per data row, header excluded.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<String>,
}

impl FileDigest {
    pub fn table(name: &str, table: &Table, rendered: &str) -> Self {
        Self {
            name: name.to_string(),
            sha256: sha256_hex(rendered.as_bytes()),
            records: table.record_checksums(),
        }
    }

    pub fn text(name: &str, contents: &str) -> Self {
        Self {
            name: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
            records: Vec::new(),
        }
    }
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}
