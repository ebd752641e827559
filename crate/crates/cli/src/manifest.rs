//! Run configuration, output artifacts and the run manifest.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

/// The parameters that determine a run's results. Worker count and output
/// paths are kept out of the hash because they never change the results.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub params: Value,
    pub workers: usize,
}

impl RunConfig {
    pub fn new(command: &str, params: Value, workers: usize) -> Self {
        Self {
            command: command.to_string(),
            params,
            workers,
        }
    }

    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({ "command": self.command, "params": self.params });
        sha256_hex(canonical.to_string().as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// One output document; written to `path`, or to stdout when `path` is `None`.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub path: Option<PathBuf>,
    pub bytes: Vec<u8>,
}

impl Artifact {
    pub fn json<T: Serialize>(name: &str, path: Option<PathBuf>, value: &T) -> CliResult<Self> {
        let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| CliError::io(e.to_string()))?;
        bytes.push(b'\n');
        Ok(Self {
            name: name.to_string(),
            path,
            bytes,
        })
    }

    pub fn text(name: &str, path: Option<PathBuf>, text: String) -> Self {
        Self {
            name: name.to_string(),
            path,
            bytes: text.into_bytes(),
        }
    }

    pub fn digest(&self) -> String {
        sha256_hex(&self.bytes)
    }

    pub fn write(&self) -> CliResult<()> {
        use std::io::Write;
        match &self.path {
            Some(p) => write_file(p, &self.bytes),
            None => std::io::stdout()
                .write_all(&self.bytes)
                .map_err(|e| CliError::io(format!("stdout: {e}"))),
        }
    }
}

pub fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(path, bytes).map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Serialize)]
pub struct ReproManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub config: RunConfig,
    pub config_hash: String,
    pub started_unix_ms: u128,
    pub timing_ms: BTreeMap<String, u128>,
    /// SHA-256 of each artifact's bytes.
    pub result_digests: BTreeMap<String, String>,
    pub outcome: String,
}

impl ReproManifest {
    pub fn new(
        command_line: Vec<String>,
        config: RunConfig,
        started_unix_ms: u128,
        timing_ms: BTreeMap<String, u128>,
        artifacts: &[Artifact],
        outcome: &str,
    ) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command_line,
            config_hash: config.hash(),
            config,
            started_unix_ms,
            timing_ms,
            result_digests: artifacts.iter().map(|a| (a.name.clone(), a.digest())).collect(),
            outcome: outcome.to_string(),
        }
    }
}
