use std::collections::BTreeMap;

use chrono::{DateTime, SecondsFormat, Utc};
use emocirc_core::AffectVector;
use serde::{Deserialize, Serialize};

use crate::prompt::PromptBundle;

/// Sampling overrides. Empty means provider defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SamplingParams(pub BTreeMap<String, serde_json::Value>);

impl SamplingParams {
    pub fn with(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRequest {
    pub provider_id: String,
    pub model: String,
    pub bundle: PromptBundle,
    pub params: SamplingParams,
    pub max_retries: u32,
    /// The state the answer is scored against (the word's position in word mode).
    pub target: AffectVector,
    /// Repeat index within a cell; part of the cache key when non-zero.
    pub sample: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub request: GenerationRequest,
    pub response_text: String,
    pub provider_metadata: serde_json::Map<String, serde_json::Value>,
    pub timestamp: DateTime<Utc>,
    pub cache_hit: bool,
    pub word_count: usize,
}

impl GenerationRecord {
    pub fn to_log_line(&self, run_id: &str) -> LogLine {
        let r = &self.request;
        LogLine {
            run_id: run_id.to_string(),
            provider_id: r.provider_id.clone(),
            model: r.model.clone(),
            question_id: r.bundle.question_id,
            spec_valence: r.target.valence(),
            spec_arousal: r.target.arousal(),
            emotion_word: r.bundle.emotion_word.clone(),
            system_text: r.bundle.system_text.clone(),
            user_text: r.bundle.user_text.clone(),
            response_text: self.response_text.clone(),
            word_count: self.word_count,
            cache_hit: self.cache_hit,
            timestamp: self.timestamp.to_rfc3339_opts(SecondsFormat::Millis, true),
        }
    }
}

/// One line of `generations.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogLine {
    pub run_id: String,
    pub provider_id: String,
    pub model: String,
    pub question_id: u32,
    pub spec_valence: f64,
    pub spec_arousal: f64,
    pub emotion_word: Option<String>,
    pub system_text: String,
    pub user_text: String,
    pub response_text: String,
    pub word_count: usize,
    pub cache_hit: bool,
    pub timestamp: String,
}

/// Whitespace-delimited token count.
pub fn word_count(text: &str) -> usize {
    text.split_whitespace().count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn word_count_basics() {
        assert_eq!(word_count(""), 0);
        assert_eq!(word_count("   \n\t"), 0);
        assert_eq!(word_count("I'm just a language model, after all."), 7);
    }

    proptest! {
        #[test]
        fn word_count_is_additive(a in "[a-z ]{0,30}[a-z]", b in "[a-z][a-z \n]{0,30}") {
            let joined = format!("{a} {b}");
            prop_assert_eq!(word_count(&joined), word_count(&a) + word_count(&b));
        }
    }
}
