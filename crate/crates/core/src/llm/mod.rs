//! Provider-agnostic chat completion: one OpenAI-compatible HTTP dialect,
//! deterministic mock providers, bounded concurrency, retries, an on-disk
//! response cache and multiple-choice answer extraction.

mod cache;
mod extract;
mod http;
mod mock;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use cache::{cached_complete, Cache, CacheStats, CACHE_FORMAT};
pub use extract::{extract_choice, ExtractError, MAX_CHOICES, MIN_CHOICES};

pub const DEFAULT_MAX_OUTPUT_TOKENS: u32 = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LlmError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("transport failed after {} attempt(s): {}", attempts.len(), attempts.join("; "))]
    Transport { attempts: Vec<String> },
    #[error("cache integrity error in {path}: {reason}")]
    Integrity { path: String, reason: String },
    #[error("cache i/o error: {0}")]
    CacheIo(String),
}

/// Side-channel data for mock providers. Never hashed, never sent.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RequestMeta {
    pub gold_index: Option<usize>,
    pub n_choices: Option<usize>,
    pub chart_key: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model_id: String,
    pub system_text: String,
    pub user_text: String,
    pub temperature: f64,
    pub max_output_tokens: u32,
    #[serde(skip)]
    pub meta: RequestMeta,
}

#[derive(Serialize)]
struct HashedFields<'a> {
    model_id: &'a str,
    system_text: &'a str,
    user_text: &'a str,
    temperature: f64,
    max_output_tokens: u32,
}

impl ChatRequest {
    pub fn new(
        model_id: impl Into<String>,
        system_text: impl Into<String>,
        user_text: impl Into<String>,
    ) -> Self {
        ChatRequest {
            model_id: model_id.into(),
            system_text: system_text.into(),
            user_text: user_text.into(),
            temperature: 0.0,
            max_output_tokens: DEFAULT_MAX_OUTPUT_TOKENS,
            meta: RequestMeta::default(),
        }
    }

    /// SHA-256 over the canonical JSON of every wire field; `meta` is excluded.
    pub fn request_hash(&self) -> String {
        let fields = HashedFields {
            model_id: &self.model_id,
            system_text: &self.system_text,
            user_text: &self.user_text,
            temperature: self.temperature,
            max_output_tokens: self.max_output_tokens,
        };
        let bytes = serde_json::to_vec(&fields).expect("plain struct serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub text: String,
    pub provider_meta: BTreeMap<String, serde_json::Value>,
    pub from_cache: bool,
    pub latency_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ProviderKind {
    OpenAiCompatible,
    MockGold,
    MockUniform {
        seed: u64,
    },
    MockFixed {
        letter: char,
    },
    /// Answers derived from the chart key alone.
    MockChartEcho,
}

impl ProviderKind {
    pub fn is_mock(&self) -> bool {
        !matches!(self, ProviderKind::OpenAiCompatible)
    }
}

impl fmt::Display for ProviderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProviderKind::OpenAiCompatible => f.write_str("openai-compatible"),
            ProviderKind::MockGold => f.write_str("mock-gold"),
            ProviderKind::MockUniform { seed } => write!(f, "mock-uniform:{seed}"),
            ProviderKind::MockFixed { letter } => write!(f, "mock-fixed:{letter}"),
            ProviderKind::MockChartEcho => f.write_str("mock-chart-echo"),
        }
    }
}

impl FromStr for ProviderKind {
    type Err = LlmError;

    /// Inverse of `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || LlmError::Config(format!("unknown provider kind {s:?}"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head, arg) {
            ("openai-compatible", None) => Ok(ProviderKind::OpenAiCompatible),
            ("mock-gold", None) => Ok(ProviderKind::MockGold),
            ("mock-chart-echo", None) => Ok(ProviderKind::MockChartEcho),
            ("mock-uniform", Some(a)) => a
                .parse()
                .map(|seed| ProviderKind::MockUniform { seed })
                .map_err(|_| bad()),
            ("mock-fixed", Some(a)) => {
                let mut it = a.chars();
                match (it.next(), it.next()) {
                    (Some(c @ 'A'..='H'), None) => Ok(ProviderKind::MockFixed { letter: c }),
                    _ => Err(bad()),
                }
            }
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetryPolicy {
    /// Total tries including the first.
    pub attempts: u32,
    /// Delay before retry i; the last entry repeats.
    pub backoff_ms: Vec<u64>,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            attempts: 4,
            backoff_ms: vec![500, 2_000, 8_000],
        }
    }
}

impl RetryPolicy {
    pub fn delay(&self, retry: usize) -> Duration {
        let ms = self
            .backoff_ms
            .get(retry)
            .or(self.backoff_ms.last())
            .copied()
            .unwrap_or(0);
        Duration::from_millis(ms)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProviderConfig {
    pub kind: ProviderKind,
    pub endpoint_url: Option<String>,
    /// Name of the environment variable holding the API key; never the key.
    pub credential_env_var: Option<String>,
    pub max_parallel: usize,
    pub retry: RetryPolicy,
    pub timeout_secs: u64,
}

impl ProviderConfig {
    pub fn mock(kind: ProviderKind) -> Self {
        ProviderConfig {
            kind,
            endpoint_url: None,
            credential_env_var: None,
            max_parallel: 8,
            retry: RetryPolicy::default(),
            timeout_secs: 120,
        }
    }

    pub fn http(endpoint_url: impl Into<String>, credential_env_var: impl Into<String>) -> Self {
        ProviderConfig {
            kind: ProviderKind::OpenAiCompatible,
            endpoint_url: Some(endpoint_url.into()),
            credential_env_var: Some(credential_env_var.into()),
            max_parallel: 4,
            retry: RetryPolicy::default(),
            timeout_secs: 120,
        }
    }

    /// Cache partition: equal requests to different providers never collide.
    pub fn namespace(&self) -> String {
        match (&self.kind, &self.endpoint_url) {
            (ProviderKind::OpenAiCompatible, Some(url)) => format!("{}@{url}", self.kind),
            (kind, _) => kind.to_string(),
        }
    }

    pub fn validate(&self) -> Result<(), LlmError> {
        if self.max_parallel == 0 {
            return Err(LlmError::Config("max_parallel must be at least 1".into()));
        }
        if self.retry.attempts == 0 {
            return Err(LlmError::Config("retry attempts must be at least 1".into()));
        }
        if self.kind == ProviderKind::OpenAiCompatible {
            if self.endpoint_url.as_deref().unwrap_or("").is_empty() {
                return Err(LlmError::Config(
                    "HTTP provider needs an endpoint_url".into(),
                ));
            }
            if self.credential_env_var.as_deref().unwrap_or("").is_empty() {
                return Err(LlmError::Config(
                    "HTTP provider needs credential_env_var".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reply {
    pub text: String,
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl Reply {
    pub fn text(text: impl Into<String>) -> Self {
        Reply {
            text: text.into(),
            meta: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackendError {
    /// Worth retrying: timeouts, 429, 5xx.
    Transient(String),
    /// Missing or rejected credentials.
    Auth(String),
    /// Will not succeed on retry.
    Fatal(String),
}

/// One attempt at one request. Retries and concurrency live in `Client`.
pub trait Backend: Send + Sync {
    fn send(&self, request: &ChatRequest) -> Result<Reply, BackendError>;
}

/// Counting semaphore.
#[derive(Debug)]
struct Gate {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Gate);

impl Gate {
    fn new(n: usize) -> Gate {
        Gate {
            free: Mutex::new(n),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

/// Safe to share across threads; at most `max_parallel` requests in flight.
pub struct Client {
    config: ProviderConfig,
    backend: Box<dyn Backend>,
    gate: Gate,
}

impl fmt::Debug for Client {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Client")
            .field("config", &self.config)
            .finish_non_exhaustive()
    }
}

impl Client {
    pub fn new(config: ProviderConfig) -> Result<Client, LlmError> {
        config.validate()?;
        let backend: Box<dyn Backend> = match &config.kind {
            ProviderKind::OpenAiCompatible => Box::new(http::HttpBackend::new(&config)),
            ProviderKind::MockGold => Box::new(mock::MockGold),
            ProviderKind::MockUniform { seed } => Box::new(mock::MockUniform { seed: *seed }),
            ProviderKind::MockFixed { letter } => Box::new(mock::MockFixed { letter: *letter }),
            ProviderKind::MockChartEcho => Box::new(mock::MockChartEcho),
        };
        Ok(Client::with_backend(config, backend))
    }

    /// `config.kind` is kept only for the cache namespace.
    pub fn with_backend(config: ProviderConfig, backend: Box<dyn Backend>) -> Client {
        let gate = Gate::new(config.max_parallel.max(1));
        Client {
            config,
            backend,
            gate,
        }
    }

    pub fn config(&self) -> &ProviderConfig {
        &self.config
    }

    pub fn complete(&self, request: &ChatRequest) -> Result<ChatResponse, LlmError> {
        let _permit = self.gate.acquire();
        let started = Instant::now();
        let attempts = self.config.retry.attempts.max(1) as usize;
        let mut log = Vec::new();
        for attempt in 0..attempts {
            match self.backend.send(request) {
                Ok(reply) => {
                    return Ok(ChatResponse {
                        text: reply.text,
                        provider_meta: reply.meta,
                        from_cache: false,
                        latency_ms: started.elapsed().as_millis() as u64,
                    })
                }
                Err(BackendError::Auth(msg)) => return Err(LlmError::Config(msg)),
                Err(BackendError::Fatal(msg)) => {
                    log.push(format!("#{}: {msg}", attempt + 1));
                    return Err(LlmError::Transport { attempts: log });
                }
                Err(BackendError::Transient(msg)) => {
                    log.push(format!("#{}: {msg}", attempt + 1));
                    if attempt + 1 < attempts {
                        std::thread::sleep(self.config.retry.delay(attempt));
                    }
                }
            }
        }
        Err(LlmError::Transport { attempts: log })
    }
}

/// Standalone form: builds a one-off client for `provider`.
pub fn complete(
    request: &ChatRequest,
    provider: &ProviderConfig,
) -> Result<ChatResponse, LlmError> {
    Client::new(provider.clone())?.complete(request)
}
