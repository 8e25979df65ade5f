use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("classifier service unreachable: {0}")]
    Transport(String),
    #[error("classifier service not ready: {0}")]
    Unavailable(String),
    #[error("label set mismatch between service and local GoEmotions list: {0}")]
    LabelMismatch(String),
    #[error("unexpected service response: {0}")]
    Protocol(String),
    #[error("invalid classifier result: {0}")]
    InvalidResult(String),
}

impl ClassifierError {
    pub fn is_retryable(&self) -> bool {
        matches!(self, Self::Transport(_) | Self::Unavailable(_))
    }
}
