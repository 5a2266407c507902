//! Reproducibility manifests: the full run configuration plus SHA-256 hashes of
//! every input and output file.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::Command;
use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    pub path: PathBuf,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub run: Command,
    pub inputs: Vec<FileRecord>,
    /// Keyed by output role, so a replay into another directory can be matched up.
    pub outputs: BTreeMap<String, FileRecord>,
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let mut reader = BufReader::new(File::open(path).map_err(|e| CliError::io(path, e))?);
    let mut hasher = Sha256::new();
    std::io::copy(&mut reader, &mut hasher).map_err(|e| CliError::io(path, e))?;
    Ok(hex::encode(hasher.finalize()))
}

fn record(path: &Path) -> Result<FileRecord> {
    Ok(FileRecord {
        path: path.to_path_buf(),
        sha256: sha256_file(path)?,
    })
}

impl Manifest {
    pub fn new(run: Command, inputs: &[PathBuf], outputs: &[(String, PathBuf)]) -> Result<Self> {
        Ok(Self {
            tool: concat!("qldpc ", env!("CARGO_PKG_VERSION")).to_string(),
            run,
            inputs: inputs.iter().map(|p| record(p)).collect::<Result<_>>()?,
            outputs: outputs
                .iter()
                .map(|(role, p)| Ok((role.clone(), record(p)?)))
                .collect::<Result<_>>()?,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let json =
            serde_json::to_string_pretty(self).map_err(|e| CliError::Internal(e.to_string()))?;
        std::fs::write(path, json + "\n").map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(path, e))
    }

    /// Inputs whose current contents no longer match the recorded hash.
    pub fn changed_inputs(&self) -> Vec<PathBuf> {
        self.inputs
            .iter()
            .filter(|r| sha256_file(&r.path).map_or(true, |h| h != r.sha256))
            .map(|r| r.path.clone())
            .collect()
    }
}

/// Where the manifest of a run writing `out` lives.
pub fn manifest_path(run: &Command) -> Option<PathBuf> {
    let with_suffix = |p: &Path| PathBuf::from(format!("{}.manifest.json", p.display()));
    match run {
        Command::BuildCode(a) => Some(a.out.join("manifest.json")),
        Command::GenData(a) => Some(with_suffix(&a.out)),
        Command::Train(a) => Some(with_suffix(&a.out)),
        Command::Sweep(a) => Some(with_suffix(&a.out)),
        Command::Replay(_) => None,
    }
}
