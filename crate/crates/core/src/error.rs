use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("non-finite value: {0}")]
    NonFinite(f64),
    #[error("zero-length vector has no direction")]
    ZeroVector,
    #[error("state count must be at least 1")]
    InvalidStateCount,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("label \"neutral\" has no position in valence-arousal space")]
    NeutralLabel,
    #[error("unknown GoEmotions label \"{0}\"")]
    UnknownLabel(String),
    #[error("label \"{label}\" maps to term \"{term}\", which is missing from the Russell term table")]
    MissingTerm { label: String, term: String },
    #[error("terms of label \"{0}\" cancel out (mean vector is near zero)")]
    DegenerateMapping(String),
    #[error("duplicate entry \"{0}\"")]
    Duplicate(String),
    #[error("label map must cover the 28 GoEmotions labels: {0}")]
    LabelSet(String),
    #[error("record {record}: {msg}")]
    Parse { record: usize, msg: String },
}
