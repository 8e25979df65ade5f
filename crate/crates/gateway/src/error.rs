use thiserror::Error;

/// Failure reported by a single provider call.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProviderError {
    #[error("authentication rejected (HTTP {status}): {body}")]
    Auth { status: u16, body: String },
    #[error("rate limited (HTTP 429): {body}")]
    RateLimited { body: String },
    #[error("server error (HTTP {status}): {body}")]
    Server { status: u16, body: String },
    #[error("request rejected (HTTP {status}): {body}")]
    Client { status: u16, body: String },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("malformed provider response ({reason}); raw body: {raw}")]
    Malformed { reason: String, raw: String },
}

impl ProviderError {
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            Self::RateLimited { .. } | Self::Server { .. } | Self::Transport(_)
        )
    }

    /// Classifies a non-2xx HTTP status.
    pub fn from_status(status: u16, body: String) -> Self {
        match status {
            401 | 403 => Self::Auth { status, body },
            429 => Self::RateLimited { body },
            500..=599 | 408 => Self::Server { status, body },
            _ => Self::Client { status, body },
        }
    }
}

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("template error: {0}")]
    Template(String),
    #[error("invalid emotional state: {0}")]
    InvalidState(String),
    #[error("unknown provider \"{0}\"")]
    UnknownProvider(String),
    #[error("provider configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Provider(ProviderError),
    #[error("gave up after {attempts} attempts: {last}")]
    Exhausted { attempts: u32, last: ProviderError },
    #[error("cache: {0}")]
    Cache(std::io::Error),
    #[error("generations log: {0}")]
    Log(std::io::Error),
}
