use thiserror::Error;

use emocirc_classifier::ClassifierError;
use emocirc_core::CoreError;
use emocirc_gateway::GatewayError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Gateway(#[from] GatewayError),
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("{} cell(s) have no generation after retries: {}", .0.len(), .0.join("; "))]
    MissingCells(Vec<String>),
    #[error("no classification for text {0}")]
    MissingClassification(String),
    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
}

impl EvalError {
    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
