use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::request::GenerationRequest;

/// SHA-256 over the canonical JSON of everything that determines a response:
/// provider, model, sampling parameters and both prompt texts.
pub fn cache_key(req: &GenerationRequest) -> String {
    let mut material: BTreeMap<&str, serde_json::Value> = BTreeMap::new();
    material.insert("provider_id", req.provider_id.clone().into());
    material.insert("model", req.model.clone().into());
    material.insert(
        "params",
        serde_json::to_value(&req.params).expect("params serialize"),
    );
    material.insert("system_text", req.bundle.system_text.clone().into());
    material.insert("user_text", req.bundle.user_text.clone().into());
    if req.sample > 0 {
        material.insert("sample", req.sample.into());
    }
    let canonical = serde_json::to_string(&material).expect("key material serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CachedResponse {
    pub response_text: String,
    #[serde(default)]
    pub provider_metadata: serde_json::Map<String, serde_json::Value>,
}

/// On-disk response cache laid out as `<root>/<first 2 hex>/<key>.json`.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    root: PathBuf,
}

impl ResponseCache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.root.join(&key[..2.min(key.len())]).join(format!("{key}.json"))
    }

    /// Unreadable or corrupt entries count as misses.
    pub fn get(&self, key: &str) -> Option<CachedResponse> {
        let bytes = std::fs::read(self.path_for(key)).ok()?;
        serde_json::from_slice(&bytes).ok()
    }

    /// Writes to a temporary file in the target directory, then renames it
    /// into place so readers never observe a partial entry.
    pub fn put(&self, key: &str, value: &CachedResponse) -> std::io::Result<()> {
        let path = self.path_for(key);
        let dir = path.parent().expect("cache path has a parent");
        std::fs::create_dir_all(dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer_pretty(&mut tmp, value)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(&path).map_err(|e| e.error)?;
        Ok(())
    }
}
