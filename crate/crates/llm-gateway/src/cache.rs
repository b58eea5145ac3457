//! One-file-per-response cache keyed by content digest.

use crate::{GatewayError, ModelConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

/// A stored completion: the request settings that produced it plus
/// the response text.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct CacheEntry {
    pub model: String,
    pub temperature: f64,
    pub max_output_tokens: usize,
    pub prompt_sha256: String,
    pub response: String,
    pub created_at: String,
}

/// Hex digest identifying a (model, temperature, token budget,
/// prompt) combination.
pub fn cache_key(cfg: &ModelConfig, prompt: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(cfg.model.as_bytes());
    hasher.update([0x1f]);
    hasher.update(cfg.temperature.to_string().as_bytes());
    hasher.update([0x1f]);
    hasher.update(cfg.max_output_tokens.to_string().as_bytes());
    hasher.update([0x1f]);
    hasher.update(prompt.as_bytes());
    hex::encode(hasher.finalize())
}

/// Where a digest lives: `<dir>/<first two hex>/<digest>.json`.
pub fn cache_path(dir: &Path, digest: &str) -> PathBuf {
    dir.join(&digest[..2]).join(format!("{digest}.json"))
}

pub(crate) fn load(path: &Path) -> Result<Option<CacheEntry>, GatewayError> {
    let bytes = match std::fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(GatewayError::CacheIo { path: path.into(), source: e }),
    };
    let entry = serde_json::from_slice(&bytes)
        .map_err(|e| GatewayError::BadResponse(format!("corrupt cache entry: {e}")))?;
    Ok(Some(entry))
}

/// Persists atomically: the entry is written to a temp file in the
/// same directory and renamed into place.
pub(crate) fn store(
    path: &Path,
    cfg: &ModelConfig,
    prompt: &str,
    digest: &str,
    response: &str,
) -> Result<(), GatewayError> {
    let io_err = |source| GatewayError::CacheIo { path: path.into(), source };
    let parent = path.parent().expect("cache paths have a parent");
    std::fs::create_dir_all(parent).map_err(io_err)?;
    let entry = CacheEntry {
        model: cfg.model.clone(),
        temperature: cfg.temperature,
        max_output_tokens: cfg.max_output_tokens,
        prompt_sha256: {
            let mut hasher = Sha256::new();
            hasher.update(prompt.as_bytes());
            hex::encode(hasher.finalize())
        },
        response: response.to_string(),
        created_at: now_rfc3339(),
    };
    debug_assert!(path.ends_with(format!("{digest}.json")));
    let file = tempfile::NamedTempFile::new_in(parent).map_err(io_err)?;
    serde_json::to_writer_pretty(&file, &entry)
        .map_err(|e| GatewayError::BadResponse(e.to_string()))?;
    file.persist(path).map_err(|e| io_err(e.error))?;
    Ok(())
}

fn now_rfc3339() -> String {
    chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
}
