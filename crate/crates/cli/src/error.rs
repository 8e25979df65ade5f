use std::fmt;

use emocirc_classifier::ClassifierError;
use emocirc_eval::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Transport,
    Failure,
}

/// An error tagged with the stage that raised it.
#[derive(Debug)]
pub struct CliError {
    pub stage: &'static str,
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn new(stage: &'static str, kind: ErrorKind, message: impl Into<String>) -> Self {
        Self {
            stage,
            kind,
            message: message.into(),
        }
    }

    pub fn config(stage: &'static str, message: impl Into<String>) -> Self {
        Self::new(stage, ErrorKind::Config, message)
    }

    pub fn failure(stage: &'static str, message: impl Into<String>) -> Self {
        Self::new(stage, ErrorKind::Failure, message)
    }

    /// 2 for configuration problems, 3 when the classifier cannot be reached.
    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Transport => 3,
            ErrorKind::Failure => 1,
        }
    }

    pub fn from_classifier(stage: &'static str, e: ClassifierError) -> Self {
        let kind = match e {
            ClassifierError::Transport(_) | ClassifierError::Unavailable(_) => ErrorKind::Transport,
            ClassifierError::LabelMismatch(_) => ErrorKind::Config,
            _ => ErrorKind::Failure,
        };
        Self::new(stage, kind, e.to_string())
    }

    pub fn from_eval(stage: &'static str, e: EvalError) -> Self {
        match e {
            EvalError::Classifier(c) => Self::from_classifier(stage, c),
            other => Self::failure(stage, other.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.stage, self.message)
    }
}

impl std::error::Error for CliError {}
