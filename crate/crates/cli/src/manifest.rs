//! Run manifests: the full resolved configuration, seed, version, stage
//! timings and a content digest of every produced file. Re-running a
//! command with the manifest's seed and config reproduces the data files
//! byte for byte.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub timings_ms: BTreeMap<String, u128>,
    pub outputs: Vec<OutputDigest>,
    pub status: String,
}

pub struct ManifestBuilder {
    manifest: Manifest,
    stage_start: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str, seed: Option<u64>, config: serde_json::Value) -> Self {
        Self {
            manifest: Manifest {
                tool: "ghost-scaler",
                version: env!("CARGO_PKG_VERSION"),
                command: command.to_string(),
                seed,
                config,
                timings_ms: BTreeMap::new(),
                outputs: Vec::new(),
                status: "ok".to_string(),
            },
            stage_start: Instant::now(),
        }
    }

    /// Swap in the resolved configuration once it is fully known.
    pub fn with_config(mut self, config: serde_json::Value) -> Self {
        self.manifest.config = config;
        self
    }

    /// Close the current stage under `name` and start timing the next one.
    pub fn stage_done(&mut self, name: &str) {
        let elapsed = self.stage_start.elapsed().as_millis();
        self.manifest.timings_ms.insert(name.to_string(), elapsed);
        self.stage_start = Instant::now();
    }

    /// Write a data file and record its digest.
    pub fn emit(&mut self, path: &Path, contents: &str) -> Result<(), CliError> {
        crate::output::write_file(path, contents)?;
        let mut hasher = Sha256::new();
        hasher.update(contents.as_bytes());
        let digest = hasher.finalize();
        let mut hex = String::with_capacity(64);
        for b in digest {
            hex.push_str(&format!("{b:02x}"));
        }
        self.manifest.outputs.push(OutputDigest {
            path: path.display().to_string(),
            bytes: contents.len(),
            sha256: hex,
        });
        Ok(())
    }

    pub fn fail(&mut self, why: &str) {
        self.manifest.status = format!("failed: {why}");
    }

    /// Serialize the manifest next to the outputs.
    pub fn write(mut self, path: &Path) -> Result<(), CliError> {
        self.stage_done("finalize");
        let json = serde_json::to_string_pretty(&self.manifest)
            .map_err(|e| CliError::numerical(format!("manifest serialization: {e}")))?;
        crate::output::write_file(path, &json)?;
        Ok(())
    }
}

/// Conventional manifest path for a data file: `<file>.manifest.json`.
pub fn manifest_path_for(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Fish the `config.omega` value out of a run manifest, for commands that
/// consume curve CSVs produced by earlier runs.
pub fn read_omega_from_manifest(csv_path: &Path) -> Option<f64> {
    let path = manifest_path_for(csv_path);
    let text = std::fs::read_to_string(path).ok()?;
    let value: serde_json::Value = serde_json::from_str(&text).ok()?;
    value.get("config")?.get("omega")?.as_f64()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_records_digests() {
        let dir = std::env::temp_dir().join("ghost-cli-manifest-test");
        std::fs::create_dir_all(&dir).unwrap();
        let out = dir.join("data.csv");
        let mut mb = ManifestBuilder::new(
            "test run",
            Some(7),
            serde_json::json!({"omega": 500.0}),
        );
        mb.emit(&out, "a,b\r\n1,2\r\n").unwrap();
        mb.stage_done("emit");
        let mpath = manifest_path_for(&out);
        mb.write(&mpath).unwrap();

        let text = std::fs::read_to_string(&mpath).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["seed"], 7);
        assert_eq!(v["status"], "ok");
        assert_eq!(v["outputs"][0]["bytes"], 10);
        assert_eq!(v["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
        assert_eq!(read_omega_from_manifest(&out), Some(500.0));
    }
}
