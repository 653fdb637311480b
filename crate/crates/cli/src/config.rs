//! Layered run configuration: flags > environment > config file > defaults.
//!
//! The file is plain text, one `key = value` per line; `#` starts a comment.
//! Every key `a.b` may also be set by the environment variable `BAZI_A_B`.
//! Credentials never appear here, only the name of the variable holding them.

use std::collections::BTreeMap;
use std::path::PathBuf;

use bazi_core::analysis::{RuleProfile, ShenShaCatalog};
use bazi_core::calendrics::SolarTimeMode;
use bazi_core::chart::{ChartConfig, LateZiPolicy};
use bazi_core::llm::{ProviderConfig, ProviderKind};
use thiserror::Error;

pub const ENV_PREFIX: &str = "BAZI_";

/// Key, default value. Empty means unset.
pub const KEYS: &[(&str, &str)] = &[
    ("rule_profile_path", ""),
    ("shensha_catalog_path", ""),
    ("template_version", "v1"),
    ("late_zi_policy", "next_day"),
    ("solar_time", "true_solar"),
    ("cache_dir", ""),
    ("luck_count", "8"),
    ("temperature", "0"),
    ("max_output_tokens", "1024"),
    ("provider", "mock-gold"),
    ("provider.endpoint_url", ""),
    ("provider.credential_env", "BAZI_API_KEY"),
    ("provider.max_parallel", ""),
    ("provider.timeout_secs", "120"),
    ("knowledge_provider", ""),
    ("knowledge_provider.endpoint_url", ""),
    ("knowledge_provider.credential_env", ""),
    ("knowledge_provider.max_parallel", ""),
];

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown config key {0:?}")]
    UnknownKey(String),
    #[error("config key {key}: {message}")]
    Value { key: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

pub fn env_name(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.replace('.', "_").to_ascii_uppercase())
}

fn known(key: &str) -> bool {
    KEYS.iter().any(|(k, _)| *k == key)
}

pub fn parse_file(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: i + 1,
            message: "expected key = value".into(),
        })?;
        let k = k.trim();
        if !known(k) {
            return Err(ConfigError::UnknownKey(k.to_string()));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GlobalConfig {
    pub rule_profile_path: Option<PathBuf>,
    pub shensha_catalog_path: Option<PathBuf>,
    pub template_version: String,
    pub chart: ChartConfig,
    pub cache_dir: Option<PathBuf>,
    pub luck_count: u32,
    pub temperature: f64,
    pub max_output_tokens: u32,
    pub provider: ProviderConfig,
    pub knowledge_provider: ProviderConfig,
    /// Resolved key/value pairs; embedded in every report.
    pub echo: BTreeMap<String, String>,
}

impl GlobalConfig {
    /// `file` is the parsed config file, `env` looks up variables, `flags`
    /// holds values given on the command line.
    pub fn resolve(
        file: &BTreeMap<String, String>,
        env: impl Fn(&str) -> Option<String>,
        flags: &BTreeMap<String, String>,
    ) -> Result<GlobalConfig, ConfigError> {
        if let Some(k) = flags.keys().find(|k| !known(k)) {
            return Err(ConfigError::UnknownKey(k.clone()));
        }
        let mut echo = BTreeMap::new();
        for (key, default) in KEYS {
            let v = flags
                .get(*key)
                .cloned()
                .or_else(|| env(&env_name(key)))
                .or_else(|| file.get(*key).cloned())
                .unwrap_or_else(|| default.to_string());
            echo.insert(key.to_string(), v);
        }
        let get = |k: &str| echo[k].as_str();
        let path = |k: &str| (!get(k).is_empty()).then(|| PathBuf::from(get(k)));
        let chart = ChartConfig {
            late_zi: parse::<LateZiPolicy>(&echo, "late_zi_policy")?,
            solar_time: parse::<SolarTimeMode>(&echo, "solar_time")?,
        };
        let provider = provider_config(&echo, "provider", None)?;
        let knowledge_provider = provider_config(&echo, "knowledge_provider", Some(&provider))?;
        Ok(GlobalConfig {
            rule_profile_path: path("rule_profile_path"),
            shensha_catalog_path: path("shensha_catalog_path"),
            template_version: get("template_version").to_string(),
            chart,
            cache_dir: path("cache_dir"),
            luck_count: parse(&echo, "luck_count")?,
            temperature: parse(&echo, "temperature")?,
            max_output_tokens: parse(&echo, "max_output_tokens")?,
            provider,
            knowledge_provider,
            echo,
        })
    }

    pub fn profile(&self) -> Result<RuleProfile, ConfigError> {
        match &self.rule_profile_path {
            None => Ok(RuleProfile::bundled()),
            Some(p) => RuleProfile::from_json(&read(p)?).map_err(|e| ConfigError::Value {
                key: "rule_profile_path".into(),
                message: e.to_string(),
            }),
        }
    }

    pub fn catalog(&self) -> Result<ShenShaCatalog, ConfigError> {
        match &self.shensha_catalog_path {
            None => Ok(ShenShaCatalog::bundled()),
            Some(p) => ShenShaCatalog::from_json(&read(p)?).map_err(|e| ConfigError::Value {
                key: "shensha_catalog_path".into(),
                message: e.to_string(),
            }),
        }
    }
}

pub fn read(path: &std::path::Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn parse<T>(echo: &BTreeMap<String, String>, key: &str) -> Result<T, ConfigError>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    echo[key].parse().map_err(|e: T::Err| ConfigError::Value {
        key: key.into(),
        message: e.to_string(),
    })
}

/// Unset knowledge-provider keys fall back to the reasoning provider's.
fn provider_config(
    echo: &BTreeMap<String, String>,
    prefix: &str,
    fallback: Option<&ProviderConfig>,
) -> Result<ProviderConfig, ConfigError> {
    let field = |name: &str| {
        let k = if name.is_empty() {
            prefix.to_string()
        } else {
            format!("{prefix}.{name}")
        };
        echo.get(&k).filter(|v| !v.is_empty()).cloned()
    };
    let value_err = |message: String| ConfigError::Value {
        key: prefix.into(),
        message,
    };
    if let (Some(base), None) = (fallback, field("")) {
        let mut cfg = base.clone();
        if let Some(url) = field("endpoint_url") {
            cfg.endpoint_url = Some(url);
        }
        if let Some(var) = field("credential_env") {
            cfg.credential_env_var = Some(var);
        }
        if let Some(n) = field("max_parallel") {
            cfg.max_parallel = n
                .parse()
                .map_err(|_| value_err(format!("bad max_parallel {n:?}")))?;
        }
        return Ok(cfg);
    }
    let kind: ProviderKind = field("")
        .unwrap_or_default()
        .parse()
        .map_err(|e: bazi_core::llm::LlmError| value_err(e.to_string()))?;
    let inherited = |name: &str, pick: fn(&ProviderConfig) -> Option<String>| {
        field(name).or_else(|| fallback.and_then(pick))
    };
    let mut cfg = match kind {
        ProviderKind::OpenAiCompatible => ProviderConfig::http(
            inherited("endpoint_url", |c| c.endpoint_url.clone()).unwrap_or_default(),
            inherited("credential_env", |c| c.credential_env_var.clone()).unwrap_or_default(),
        ),
        kind => ProviderConfig::mock(kind),
    };
    if let Some(n) = field("max_parallel") {
        cfg.max_parallel = n
            .parse()
            .map_err(|_| value_err(format!("bad max_parallel {n:?}")))?;
    }
    if let Some(t) = echo.get("provider.timeout_secs").filter(|v| !v.is_empty()) {
        cfg.timeout_secs = t
            .parse()
            .map_err(|_| value_err(format!("bad timeout_secs {t:?}")))?;
    }
    cfg.validate().map_err(|e| value_err(e.to_string()))?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect()
    }

    #[test]
    fn precedence_flags_env_file_default() {
        let file = map(&[
            ("late_zi_policy", "same_day"),
            ("luck_count", "6"),
            ("template_version", "v1"),
        ]);
        let env = |k: &str| match k {
            "BAZI_LUCK_COUNT" => Some("7".to_string()),
            "BAZI_SOLAR_TIME" => Some("off".to_string()),
            _ => None,
        };
        let flags = map(&[("solar_time", "mean_solar")]);
        let cfg = GlobalConfig::resolve(&file, env, &flags).unwrap();
        assert_eq!(cfg.chart.late_zi, LateZiPolicy::SameDay);
        assert_eq!(cfg.luck_count, 7);
        assert_eq!(cfg.chart.solar_time, SolarTimeMode::MeanSolar);
        assert_eq!(cfg.max_output_tokens, 1024);
        assert_eq!(cfg.echo["solar_time"], "mean_solar");
        assert_eq!(cfg.echo.len(), KEYS.len());
    }

    #[test]
    fn file_syntax() {
        let m =
            parse_file("# comment\n\nluck_count = 5  # trailing\nprovider=mock-fixed:B\n").unwrap();
        assert_eq!(m["luck_count"], "5");
        assert_eq!(m["provider"], "mock-fixed:B");
        assert!(matches!(
            parse_file("nonsense"),
            Err(ConfigError::Syntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_file("colour = red"),
            Err(ConfigError::UnknownKey(_))
        ));
    }

    #[test]
    fn knowledge_provider_inherits() {
        let flags = map(&[
            ("provider", "openai-compatible"),
            (
                "provider.endpoint_url",
                "https://example.invalid/v1/chat/completions",
            ),
            ("knowledge_provider.max_parallel", "2"),
        ]);
        let cfg = GlobalConfig::resolve(&BTreeMap::new(), |_| None, &flags).unwrap();
        assert_eq!(
            cfg.knowledge_provider.endpoint_url,
            cfg.provider.endpoint_url
        );
        assert_eq!(
            cfg.knowledge_provider.credential_env_var.as_deref(),
            Some("BAZI_API_KEY")
        );
        assert_eq!(cfg.knowledge_provider.max_parallel, 2);
    }

    #[test]
    fn bad_values_name_their_key() {
        let flags = map(&[("late_zi_policy", "sometimes")]);
        let err = GlobalConfig::resolve(&BTreeMap::new(), |_| None, &flags).unwrap_err();
        assert!(err.to_string().contains("late_zi_policy"));
    }
}
