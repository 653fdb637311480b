use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{ChatRequest, ChatResponse, Client, LlmError};

pub const CACHE_FORMAT: &str = "bazi-llm-cache/1";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheStats {
    pub hits: u64,
    pub misses: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RequestEcho {
    request_hash: String,
    model_id: String,
    system_text: String,
    user_text: String,
    temperature: f64,
    max_output_tokens: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct StoredResponse {
    text: String,
    provider_meta: BTreeMap<String, serde_json::Value>,
}

#[derive(Serialize)]
struct Sealed<'a> {
    format: &'a str,
    key: &'a str,
    namespace: &'a str,
    request: &'a RequestEcho,
    response: &'a StoredResponse,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Record {
    format: String,
    key: String,
    namespace: String,
    request: RequestEcho,
    response: StoredResponse,
    /// SHA-256 of the canonical JSON of every other field.
    checksum: String,
}

fn checksum(
    format: &str,
    key: &str,
    namespace: &str,
    request: &RequestEcho,
    response: &StoredResponse,
) -> String {
    let sealed = Sealed {
        format,
        key,
        namespace,
        request,
        response,
    };
    hex::encode(Sha256::digest(
        serde_json::to_vec(&sealed).expect("plain struct serializes"),
    ))
}

/// One JSON file per (request hash, provider namespace).
#[derive(Debug)]
pub struct Cache {
    dir: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

static TMP_SEQ: AtomicU64 = AtomicU64::new(0);

impl Cache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Cache, LlmError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)
            .map_err(|e| LlmError::CacheIo(format!("{}: {e}", dir.display())))?;
        Ok(Cache {
            dir,
            locks: Mutex::new(HashMap::new()),
            hits: AtomicU64::new(0),
            misses: AtomicU64::new(0),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(request: &ChatRequest, namespace: &str) -> String {
        let mut h = Sha256::new();
        h.update(request.request_hash().as_bytes());
        h.update(b"\n");
        h.update(namespace.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    fn key_lock(&self, key: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(key.to_string()).or_default().clone()
    }

    /// `Ok(None)` only when no file exists; anything unreadable is an error.
    pub fn load(
        &self,
        request: &ChatRequest,
        namespace: &str,
    ) -> Result<Option<ChatResponse>, LlmError> {
        let key = Cache::key(request, namespace);
        let path = self.path_for(&key);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(LlmError::CacheIo(format!("{}: {e}", path.display()))),
        };
        let integrity = |reason: String| LlmError::Integrity {
            path: path.display().to_string(),
            reason,
        };
        let rec: Record = serde_json::from_slice(&bytes)
            .map_err(|e| integrity(format!("unparseable record: {e}")))?;
        if rec.format != CACHE_FORMAT {
            return Err(integrity(format!("unknown format {:?}", rec.format)));
        }
        let expected = checksum(
            &rec.format,
            &rec.key,
            &rec.namespace,
            &rec.request,
            &rec.response,
        );
        if rec.checksum != expected {
            return Err(integrity("checksum mismatch".into()));
        }
        if rec.key != key
            || rec.namespace != namespace
            || rec.request.request_hash != request.request_hash()
        {
            return Err(integrity("record does not belong to this request".into()));
        }
        Ok(Some(ChatResponse {
            text: rec.response.text,
            provider_meta: rec.response.provider_meta,
            from_cache: true,
            latency_ms: 0,
        }))
    }

    /// Write-then-rename, so readers never see a partial file.
    pub fn store(
        &self,
        request: &ChatRequest,
        namespace: &str,
        response: &ChatResponse,
    ) -> Result<(), LlmError> {
        let key = Cache::key(request, namespace);
        let echo = RequestEcho {
            request_hash: request.request_hash(),
            model_id: request.model_id.clone(),
            system_text: request.system_text.clone(),
            user_text: request.user_text.clone(),
            temperature: request.temperature,
            max_output_tokens: request.max_output_tokens,
        };
        let stored = StoredResponse {
            text: response.text.clone(),
            provider_meta: response.provider_meta.clone(),
        };
        let rec = Record {
            checksum: checksum(CACHE_FORMAT, &key, namespace, &echo, &stored),
            format: CACHE_FORMAT.into(),
            key: key.clone(),
            namespace: namespace.into(),
            request: echo,
            response: stored,
        };
        let bytes = serde_json::to_vec_pretty(&rec).expect("plain struct serializes");
        let io = |e: std::io::Error| LlmError::CacheIo(format!("{}: {e}", self.dir.display()));
        let tmp = self.dir.join(format!(
            ".{key}.{}.{}.tmp",
            std::process::id(),
            TMP_SEQ.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, &bytes).map_err(io)?;
        fs::rename(&tmp, self.path_for(&key)).map_err(io)
    }
}

/// Hit: stored text with `from_cache` set. Miss: `client.complete`, then store.
/// Identical concurrent requests reach the provider once.
pub fn cached_complete(
    client: &Client,
    cache: &Cache,
    request: &ChatRequest,
) -> Result<ChatResponse, LlmError> {
    let namespace = client.config().namespace();
    let lock = cache.key_lock(&Cache::key(request, &namespace));
    let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(hit) = cache.load(request, &namespace)? {
        cache.hits.fetch_add(1, Ordering::Relaxed);
        return Ok(hit);
    }
    cache.misses.fetch_add(1, Ordering::Relaxed);
    let response = client.complete(request)?;
    cache.store(request, &namespace, &response)?;
    Ok(response)
}
