use std::collections::BTreeMap;
use std::time::Duration;

use serde_json::{json, Value};

use super::{Backend, BackendError, ChatRequest, ProviderConfig, Reply};

/// OpenAI-compatible `chat/completions` over HTTP(S).
pub(crate) struct HttpBackend {
    agent: ureq::Agent,
    endpoint: String,
    credential_env_var: String,
}

impl HttpBackend {
    pub fn new(config: &ProviderConfig) -> HttpBackend {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(Duration::from_secs(config.timeout_secs)))
            .http_status_as_error(false)
            .build()
            .into();
        HttpBackend {
            agent,
            endpoint: config.endpoint_url.clone().unwrap_or_default(),
            credential_env_var: config.credential_env_var.clone().unwrap_or_default(),
        }
    }
}

fn body(request: &ChatRequest) -> Value {
    let mut messages = Vec::new();
    if !request.system_text.is_empty() {
        messages.push(json!({"role": "system", "content": request.system_text}));
    }
    messages.push(json!({"role": "user", "content": request.user_text}));
    json!({
        "model": request.model_id,
        "messages": messages,
        "temperature": request.temperature,
        "max_tokens": request.max_output_tokens,
    })
}

impl Backend for HttpBackend {
    fn send(&self, request: &ChatRequest) -> Result<Reply, BackendError> {
        // read per call so the key never outlives the request
        let key = std::env::var(&self.credential_env_var).map_err(|_| {
            BackendError::Auth(format!(
                "environment variable {} is not set",
                self.credential_env_var
            ))
        })?;
        let mut resp = self
            .agent
            .post(&self.endpoint)
            .header("Authorization", format!("Bearer {key}"))
            .send_json(body(request))
            .map_err(|e| BackendError::Transient(e.to_string()))?;
        let status = resp.status().as_u16();
        match status {
            200..=299 => {}
            401 | 403 => {
                return Err(BackendError::Auth(format!(
                    "endpoint rejected credentials (HTTP {status})"
                )))
            }
            408 | 429 | 500..=599 => return Err(BackendError::Transient(format!("HTTP {status}"))),
            _ => return Err(BackendError::Fatal(format!("HTTP {status}"))),
        }
        let v: Value = resp
            .body_mut()
            .read_json()
            .map_err(|e| BackendError::Transient(format!("unreadable response body: {e}")))?;
        let text = v["choices"][0]["message"]["content"]
            .as_str()
            .ok_or_else(|| {
                BackendError::Fatal("response lacks choices[0].message.content".into())
            })?;
        let mut meta = BTreeMap::new();
        meta.insert("http_status".to_string(), json!(status));
        for field in ["id", "model", "usage"] {
            if let Some(x) = v.get(field) {
                meta.insert(field.to_string(), x.clone());
            }
        }
        Ok(Reply {
            text: text.to_string(),
            meta,
        })
    }
}
