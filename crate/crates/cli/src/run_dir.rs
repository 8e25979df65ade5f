//! Run directories, their manifest and the lock that guards them.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::Write;
use std::path::{Path, PathBuf};

use chrono::Utc;
use emocirc_eval::{logs::write_atomic, PromptMode};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::LoadedConfig;
use crate::error::CliError;

pub const MANIFEST: &str = "manifest.json";
pub const CONFIG_SNAPSHOT: &str = "config.toml";
const LOCK: &str = ".lock";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub complete: bool,
    pub count: usize,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub created: String,
    /// Directory relative paths in the config snapshot resolve against.
    pub config_base: PathBuf,
    pub config_sha256: String,
    pub mode: PromptMode,
    /// Provider ids selected for the run; empty means all configured.
    pub models: Vec<String>,
    pub offline: bool,
    pub stages: BTreeMap<String, StageRecord>,
}

impl RunManifest {
    pub fn stage(&self, name: &str) -> Option<&StageRecord> {
        self.stages.get(name)
    }

    pub fn is_complete(&self, name: &str) -> bool {
        self.stage(name).is_some_and(|s| s.complete)
    }
}

/// Removes the lock file when dropped.
#[derive(Debug)]
pub struct RunLock {
    path: PathBuf,
}

impl RunLock {
    pub fn acquire(dir: &Path) -> Result<Self, CliError> {
        let path = dir.join(LOCK);
        let mut f = OpenOptions::new()
            .write(true)
            .create_new(true)
            .open(&path)
            .map_err(|e| {
                CliError::config(
                    "run",
                    format!("{} is locked by another invocation ({e}); remove {} if stale", dir.display(), path.display()),
                )
            })?;
        let _ = writeln!(f, "{}", std::process::id());
        Ok(Self { path })
    }
}

impl Drop for RunLock {
    fn drop(&mut self) {
        let _ = std::fs::remove_file(&self.path);
    }
}

/// An open, locked run directory.
#[derive(Debug)]
pub struct RunDir {
    pub path: PathBuf,
    pub manifest: RunManifest,
    pub config: LoadedConfig,
    _lock: RunLock,
}

fn io_err(stage: &'static str, path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::failure(stage, format!("{}: {e}", path.display()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl RunDir {
    /// Creates `<output_dir>/<timestamp>-<config hash>` with a byte-for-byte
    /// copy of the config.
    pub fn create(config: LoadedConfig, mode: PromptMode, models: Vec<String>, offline: bool) -> Result<Self, CliError> {
        let now = Utc::now();
        let hash = sha256_hex(config.raw.as_bytes());
        let root = config.output_dir();
        std::fs::create_dir_all(&root).map_err(|e| io_err("run", &root, e))?;
        let stamp = now.format("%Y%m%dT%H%M%S%.3fZ");
        let mut run_id = format!("{stamp}-{}", &hash[..8]);
        let mut n = 1;
        let path = loop {
            let p = root.join(&run_id);
            match std::fs::create_dir(&p) {
                Ok(()) => break p,
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    n += 1;
                    run_id = format!("{stamp}-{}-{n}", &hash[..8]);
                }
                Err(e) => return Err(io_err("run", &p, e)),
            }
        };
        let lock = RunLock::acquire(&path)?;
        let snapshot = path.join(CONFIG_SNAPSHOT);
        std::fs::write(&snapshot, config.raw.as_bytes()).map_err(|e| io_err("run", &snapshot, e))?;
        let base = std::fs::canonicalize(&config.base).unwrap_or_else(|_| config.base.clone());
        let manifest = RunManifest {
            run_id,
            created: now.to_rfc3339(),
            config_base: base,
            config_sha256: hash,
            mode,
            models,
            offline,
            stages: BTreeMap::new(),
        };
        let dir = Self {
            path,
            manifest,
            config,
            _lock: lock,
        };
        dir.save()?;
        Ok(dir)
    }

    /// Opens an existing run; its config snapshot replaces the given config.
    pub fn open(output_dir: &Path, run_id: &str) -> Result<Self, CliError> {
        let path = output_dir.join(run_id);
        if !path.join(MANIFEST).is_file() {
            return Err(CliError::config("run", format!("no run `{run_id}` under {}", output_dir.display())));
        }
        let lock = RunLock::acquire(&path)?;
        let m = path.join(MANIFEST);
        let bytes = std::fs::read(&m).map_err(|e| io_err("run", &m, e))?;
        let manifest: RunManifest = serde_json::from_slice(&bytes).map_err(|e| io_err("run", &m, e))?;
        let snap = path.join(CONFIG_SNAPSHOT);
        let raw = std::fs::read_to_string(&snap).map_err(|e| io_err("run", &snap, e))?;
        let config = LoadedConfig::parse(raw, manifest.config_base.clone())?;
        Ok(Self {
            path,
            manifest,
            config,
            _lock: lock,
        })
    }

    pub fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    pub fn save(&self) -> Result<(), CliError> {
        let mut bytes = serde_json::to_vec_pretty(&self.manifest).expect("manifest serializes");
        bytes.push(b'\n');
        let p = self.file(MANIFEST);
        write_atomic(&p, &bytes).map_err(|e| CliError::failure("run", e.to_string()))
    }

    pub fn record(&mut self, stage: &str, record: StageRecord) -> Result<(), CliError> {
        self.manifest.stages.insert(stage.to_string(), record);
        self.save()
    }
}
