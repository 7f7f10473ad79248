//! Run manifests written next to every command's outputs.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Failure;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Artifact {
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: u64,
}

impl Artifact {
    pub fn of(path: &Path) -> Result<Self, Failure> {
        let (sha256, bytes) = sha256_file(path)?;
        Ok(Artifact {
            path: path.to_path_buf(),
            sha256,
            bytes,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Effective options after flag, config and default resolution.
    pub config: Value,
    pub seeds: BTreeMap<String, u64>,
    pub inputs: Vec<Artifact>,
    pub outputs: Vec<Artifact>,
    pub started_at: String,
    pub finished_at: String,
}

/// Collects a manifest across one command.
pub struct ManifestBuilder {
    command: String,
    config: Value,
    seeds: BTreeMap<String, u64>,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    started_at: String,
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

impl ManifestBuilder {
    pub fn start(command: &str, config: &impl Serialize) -> Self {
        ManifestBuilder {
            command: command.to_string(),
            config: serde_json::to_value(config).expect("options serialize"),
            seeds: BTreeMap::new(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            started_at: now(),
        }
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.to_string(), value);
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Checksum every artifact and write the manifest to `path`.
    pub fn finish(self, path: &Path) -> Result<RunManifest, Failure> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: self.command,
            config: self.config,
            seeds: self.seeds,
            inputs: self.inputs.iter().map(|p| Artifact::of(p)).collect::<Result<_, _>>()?,
            outputs: self.outputs.iter().map(|p| Artifact::of(p)).collect::<Result<_, _>>()?,
            started_at: self.started_at,
            finished_at: now(),
        };
        write_json(path, &manifest)?;
        Ok(manifest)
    }
}

pub fn sha256_file(path: &Path) -> Result<(String, u64), Failure> {
    let mut f = File::open(path).map_err(|e| Failure::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut total = 0u64;
    loop {
        let n = f.read(&mut buf).map_err(|e| Failure::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
        total += n as u64;
    }
    Ok((hex::encode(hasher.finalize()), total))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("value serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::io(path, e))
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::data("MalformedInput", format!("{}: {e}", path.display())))
}
