use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

impl FileDigest {
    fn of(path: &Path) -> Result<Self> {
        let data = fs::read(path).with_context(|| format!("{}: cannot read for digest", path.display()))?;
        Ok(FileDigest {
            path: path.display().to_string(),
            bytes: data.len() as u64,
            sha256: hex::encode(Sha256::digest(&data)),
        })
    }
}

/// What a run read and wrote, for reproducing it.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Vec<String>,
    pub versions: BTreeMap<&'static str, &'static str>,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub wall_time_seconds: f64,
}

/// Tracks the files a command touches and writes them through one place.
pub struct Run {
    command: String,
    seed: u64,
    started: Instant,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
    manifest: Option<PathBuf>,
}

impl Run {
    pub fn new(command: &str, seed: u64, manifest: Option<PathBuf>) -> Self {
        Run {
            command: command.to_string(),
            seed,
            started: Instant::now(),
            inputs: Vec::new(),
            outputs: Vec::new(),
            manifest,
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn write(&mut self, path: &Path, contents: &str) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("{}: cannot create directory", dir.display()))?;
        }
        fs::write(path, contents).with_context(|| format!("{}: cannot write", path.display()))?;
        self.outputs.push(path.to_path_buf());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, path: &Path, value: &T) -> Result<()> {
        self.write(path, &polyforge::io::to_json_string(value))
    }

    /// Writes the manifest next to the first output unless a path was given. Runs without
    /// outputs write nothing.
    pub fn finish(self) -> Result<Option<PathBuf>> {
        let Some(first) = self.outputs.first() else { return Ok(None) };
        let path = self.manifest.clone().unwrap_or_else(|| {
            let mut name = first.file_name().unwrap_or_default().to_os_string();
            name.push(".manifest.json");
            first.with_file_name(name)
        });
        let manifest = RunManifest {
            command: self.command.clone(),
            parameters: std::env::args().skip(1).collect(),
            versions: BTreeMap::from([("polyforge", polyforge::VERSION), ("polyforge-cli", env!("CARGO_PKG_VERSION"))]),
            seed: self.seed,
            inputs: self.inputs.iter().map(|p| FileDigest::of(p)).collect::<Result<_>>()?,
            outputs: self.outputs.iter().map(|p| FileDigest::of(p)).collect::<Result<_>>()?,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        fs::write(&path, polyforge::io::to_json_string(&manifest))
            .with_context(|| format!("{}: cannot write", path.display()))?;
        Ok(Some(path))
    }
}
