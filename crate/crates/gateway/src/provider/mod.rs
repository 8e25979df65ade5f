//! Chat-completion adapters. Each maps the rendered system/user pair onto the
//! provider's native message format.

mod gemini;
mod http;
mod mock;
mod openai;

use std::sync::Arc;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{GatewayError, ProviderError};
use crate::request::{GenerationRequest, SamplingParams};

pub use gemini::GeminiChat;
pub use mock::{MockProvider, MOCK_KEYWORDS};
pub use openai::OpenAiChat;

/// Text plus whatever the provider reports about the call.
#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub text: String,
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

pub trait ChatProvider: Send + Sync {
    fn complete(&self, req: &GenerationRequest) -> Result<Completion, ProviderError>;

    /// False for providers that never leave the process.
    fn is_remote(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProviderKind {
    /// OpenAI chat completions.
    Openai,
    /// Google Gemini `generateContent`.
    Gemini,
    /// A self-hosted server speaking the OpenAI chat protocol.
    OpenaiCompatible,
    /// Deterministic offline answers.
    Mock,
}

fn default_concurrency() -> usize {
    4
}

fn default_timeout() -> u64 {
    60
}

/// One `[[providers]]` entry of the run configuration. Credentials never
/// appear here; `api_key_env` names the environment variable holding them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProviderConfig {
    pub id: String,
    pub kind: ProviderKind,
    pub model: String,
    #[serde(default)]
    pub base_url: Option<String>,
    #[serde(default)]
    pub api_key_env: Option<String>,
    #[serde(default = "default_concurrency")]
    pub max_concurrency: usize,
    #[serde(default = "default_timeout")]
    pub timeout_seconds: u64,
    #[serde(default, skip_serializing_if = "SamplingParams::is_empty")]
    pub params: SamplingParams,
    /// Mock only: sector steps added to the target direction.
    #[serde(default)]
    pub mock_shift: i64,
    /// Mock only: extra sector steps per question number.
    #[serde(default)]
    pub mock_question_shift: i64,
}

impl ProviderConfig {
    pub fn mock(id: &str, model: &str) -> Self {
        Self {
            id: id.into(),
            kind: ProviderKind::Mock,
            model: model.into(),
            base_url: None,
            api_key_env: None,
            max_concurrency: default_concurrency(),
            timeout_seconds: default_timeout(),
            params: SamplingParams::default(),
            mock_shift: 0,
            mock_question_shift: 0,
        }
    }

    fn base_url(&self) -> Result<String, GatewayError> {
        let default = match self.kind {
            ProviderKind::Openai => Some("https://api.openai.com/v1"),
            ProviderKind::Gemini => Some("https://generativelanguage.googleapis.com/v1beta"),
            ProviderKind::OpenaiCompatible | ProviderKind::Mock => None,
        };
        self.base_url
            .clone()
            .or(default.map(String::from))
            .map(|u| u.trim_end_matches('/').to_string())
            .ok_or_else(|| GatewayError::Config(format!("provider \"{}\" needs base_url", self.id)))
    }

    fn api_key(&self, required: bool) -> Result<Option<String>, GatewayError> {
        match &self.api_key_env {
            Some(var) => match std::env::var(var) {
                Ok(v) if !v.is_empty() => Ok(Some(v)),
                _ if required => Err(GatewayError::Config(format!(
                    "provider \"{}\": environment variable {var} is not set",
                    self.id
                ))),
                _ => Ok(None),
            },
            None if required => Err(GatewayError::Config(format!(
                "provider \"{}\" needs api_key_env",
                self.id
            ))),
            None => Ok(None),
        }
    }
}

pub fn build_provider(cfg: &ProviderConfig) -> Result<Arc<dyn ChatProvider>, GatewayError> {
    if cfg.max_concurrency == 0 {
        return Err(GatewayError::Config(format!(
            "provider \"{}\": max_concurrency must be at least 1",
            cfg.id
        )));
    }
    let timeout = Duration::from_secs(cfg.timeout_seconds);
    Ok(match cfg.kind {
        ProviderKind::Openai => Arc::new(OpenAiChat::new(cfg.base_url()?, cfg.api_key(true)?, timeout)),
        ProviderKind::OpenaiCompatible => {
            Arc::new(OpenAiChat::new(cfg.base_url()?, cfg.api_key(false)?, timeout))
        }
        ProviderKind::Gemini => Arc::new(GeminiChat::new(
            cfg.base_url()?,
            cfg.api_key(true)?.unwrap_or_default(),
            timeout,
        )),
        ProviderKind::Mock => Arc::new(MockProvider::new(cfg.mock_shift, cfg.mock_question_shift)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_rejects_inline_credentials() {
        let src = r#"{"id":"x","kind":"openai","model":"gpt-4","api_key":"sk-123"}"#;
        assert!(serde_json::from_str::<ProviderConfig>(src).is_err());
    }

    #[test]
    fn missing_key_env_is_a_config_error() {
        let cfg = ProviderConfig {
            kind: ProviderKind::Openai,
            api_key_env: Some("EMOCIRC_TEST_SURELY_UNSET".into()),
            ..ProviderConfig::mock("gpt", "gpt-4")
        };
        assert!(matches!(build_provider(&cfg), Err(GatewayError::Config(_))));
    }

    #[test]
    fn compatible_endpoint_needs_url() {
        let cfg = ProviderConfig {
            kind: ProviderKind::OpenaiCompatible,
            ..ProviderConfig::mock("local", "llama3")
        };
        assert!(build_provider(&cfg).is_err());
        let cfg = ProviderConfig {
            base_url: Some("http://127.0.0.1:9/v1/".into()),
            ..cfg
        };
        assert!(build_provider(&cfg).is_ok());
    }
}
