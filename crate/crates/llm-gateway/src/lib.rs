//! Completion client with an on-disk response cache.
//!
//! [`Gateway::complete`] sends a prompt to a chat-completions
//! endpoint, retrying transient failures with exponential backoff,
//! and caches every response under a content digest of the model
//! settings and prompt bytes. A cache hit returns without touching
//! the network, so a populated cache makes whole runs deterministic
//! and offline; replay mode enforces that by failing on any miss.
//! [`extract_vql`] pulls the query line out of a model's prose.
//!
//! Cache writes go to a temp file first and rename into place, so
//! concurrent callers can share one cache directory: duplicate
//! misses may both fetch, but identical keys store identical bytes.

mod cache;
mod extract;

pub use cache::{cache_key, cache_path};
pub use extract::{extract_vql, ExtractionError};

use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::time::Duration;

/// Endpoint and sampling settings for one model. Deserialization
/// fills omitted knobs with the [`ModelConfig::new`] defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    /// Chat-completions URL, e.g. `https://host/v1/chat/completions`.
    pub endpoint: String,
    pub model: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_output_tokens")]
    pub max_output_tokens: usize,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_retries")]
    pub max_retries: usize,
    /// Environment variable holding the bearer token, when the
    /// endpoint needs one.
    #[serde(default)]
    pub api_key_env: Option<String>,
}

fn default_max_output_tokens() -> usize {
    256
}

fn default_timeout_secs() -> u64 {
    60
}

fn default_max_retries() -> usize {
    3
}

impl ModelConfig {
    /// Deterministic defaults: temperature 0, modest output budget.
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        ModelConfig {
            endpoint: endpoint.into(),
            model: model.into(),
            temperature: 0.0,
            max_output_tokens: 256,
            timeout_secs: 60,
            max_retries: 3,
            api_key_env: None,
        }
    }
}

/// Why a completion was not produced.
#[derive(Debug, thiserror::Error)]
pub enum GatewayError {
    #[error("rate limited after {attempts} attempt(s)")]
    RateLimited { attempts: usize },
    #[error("request timed out after {0} attempt(s)")]
    Timeout(usize),
    #[error("provider returned {status}: {body_excerpt}")]
    ProviderError { status: u16, body_excerpt: String },
    #[error("replay cache has no entry {digest}")]
    ReplayMiss { digest: String },
    #[error("cache I/O failed at {path}: {source}")]
    CacheIo {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed response: {0}")]
    BadResponse(String),
}

/// Cached or live access to a completion endpoint.
#[derive(Debug)]
pub struct Gateway {
    cache_dir: PathBuf,
    replay: bool,
}

impl Gateway {
    /// A live gateway caching into `cache_dir`.
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        Gateway { cache_dir: cache_dir.into(), replay: false }
    }

    /// A cache-only gateway: hits replay, misses fail, the network is
    /// never touched.
    pub fn replay(cache_dir: impl Into<PathBuf>) -> Self {
        Gateway { cache_dir: cache_dir.into(), replay: true }
    }

    pub fn is_replay(&self) -> bool {
        self.replay
    }

    /// Returns the completion for the prompt: from cache when the
    /// digest is known, otherwise from the endpoint (with retries),
    /// storing the response before returning it.
    pub fn complete(&self, prompt: &str, cfg: &ModelConfig) -> Result<String, GatewayError> {
        let digest = cache_key(cfg, prompt);
        let path = cache_path(&self.cache_dir, &digest);
        if let Some(entry) = cache::load(&path)? {
            return Ok(entry.response);
        }
        if self.replay {
            return Err(GatewayError::ReplayMiss { digest });
        }
        let response = request_with_retries(prompt, cfg)?;
        cache::store(&path, cfg, prompt, &digest, &response)?;
        Ok(response)
    }

    /// Stores a response for the prompt without touching the network,
    /// so later [`Gateway::complete`] calls, replay mode included,
    /// will return it from cache.
    pub fn seed(&self, prompt: &str, cfg: &ModelConfig, response: &str) -> Result<(), GatewayError> {
        let digest = cache_key(cfg, prompt);
        let path = cache_path(&self.cache_dir, &digest);
        cache::store(&path, cfg, prompt, &digest, response)
    }
}

fn backoff_delay(attempt: usize) -> Duration {
    Duration::from_millis((100u64 << attempt.min(5)).min(2_000))
}

fn request_with_retries(prompt: &str, cfg: &ModelConfig) -> Result<String, GatewayError> {
    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(cfg.timeout_secs))
        .build()
        .map_err(|e| GatewayError::BadResponse(e.to_string()))?;
    let attempts = cfg.max_retries + 1;
    let mut last: Option<GatewayError> = None;
    for attempt in 0..attempts {
        if attempt > 0 {
            std::thread::sleep(backoff_delay(attempt - 1));
        }
        match request_once(&client, prompt, cfg) {
            Ok(text) => return Ok(text),
            Err(err) => {
                let transient = matches!(
                    err,
                    GatewayError::RateLimited { .. }
                        | GatewayError::Timeout(_)
                        | GatewayError::ProviderError { status: 500..=599, .. }
                );
                if !transient {
                    return Err(err);
                }
                last = Some(err);
            }
        }
    }
    Err(match last.expect("at least one attempt") {
        GatewayError::RateLimited { .. } => GatewayError::RateLimited { attempts },
        GatewayError::Timeout(_) => GatewayError::Timeout(attempts),
        other => other,
    })
}

fn request_once(
    client: &reqwest::blocking::Client,
    prompt: &str,
    cfg: &ModelConfig,
) -> Result<String, GatewayError> {
    let body = serde_json::json!({
        "model": cfg.model,
        "messages": [{ "role": "user", "content": prompt }],
        "temperature": cfg.temperature,
        "max_tokens": cfg.max_output_tokens,
    });
    let mut request = client.post(&cfg.endpoint).json(&body);
    if let Some(var) = &cfg.api_key_env {
        if let Ok(key) = std::env::var(var) {
            request = request.bearer_auth(key);
        }
    }
    let response = request.send().map_err(|e| {
        if e.is_timeout() {
            GatewayError::Timeout(1)
        } else {
            GatewayError::ProviderError { status: 0, body_excerpt: e.to_string() }
        }
    })?;
    let status = response.status().as_u16();
    let text = response.text().unwrap_or_default();
    if status == 429 {
        return Err(GatewayError::RateLimited { attempts: 1 });
    }
    if status != 200 {
        let mut excerpt = text;
        excerpt.truncate(200);
        return Err(GatewayError::ProviderError { status, body_excerpt: excerpt });
    }
    let doc: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| GatewayError::BadResponse(e.to_string()))?;
    doc.pointer("/choices/0/message/content")
        .and_then(|c| c.as_str())
        .map(|s| s.to_string())
        .ok_or_else(|| GatewayError::BadResponse("no choices[0].message.content".into()))
}
