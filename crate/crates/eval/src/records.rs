//! Joining generation records with their classifications.

use std::collections::HashMap;

use emocirc_classifier::{ClassificationLine, Classifier, TextItem};
use emocirc_core::AffectVector;
use emocirc_gateway::LogLine;

use crate::error::EvalError;
use crate::logs::text_id;

/// A generated answer together with its predicted label.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub text_id: String,
    /// Row key in the result tables: the provider id the answer came from.
    pub model: String,
    pub question_id: u32,
    pub spec: AffectVector,
    pub emotion_word: Option<String>,
    pub response_text: String,
    pub word_count: usize,
    pub top_label: String,
}

/// Classifies every response in `lines`. Text ids are line positions.
pub fn classify_records(
    lines: &[LogLine],
    classifier: &dyn Classifier,
    run_id: &str,
) -> Result<Vec<ClassificationLine>, EvalError> {
    let items: Vec<TextItem> = lines
        .iter()
        .enumerate()
        .map(|(i, l)| TextItem::new(text_id(i), l.response_text.clone()))
        .collect();
    let results = classifier.classify(&items)?;
    let version = classifier.model_version();
    Ok(results
        .iter()
        .map(|r| ClassificationLine::new(run_id, r, &version))
        .collect())
}

/// Pairs each log line with its classification by text id. Classification
/// order does not matter.
pub fn join(lines: &[LogLine], classifications: &[ClassificationLine]) -> Result<Vec<Sample>, EvalError> {
    let by_id: HashMap<&str, &ClassificationLine> = classifications
        .iter()
        .map(|c| (c.text_id.as_str(), c))
        .collect();
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let id = text_id(i);
            let c = by_id
                .get(id.as_str())
                .ok_or_else(|| EvalError::MissingClassification(id.clone()))?;
            Ok(Sample {
                model: l.provider_id.clone(),
                question_id: l.question_id,
                spec: AffectVector::new(l.spec_valence, l.spec_arousal)?,
                emotion_word: l.emotion_word.clone(),
                response_text: l.response_text.clone(),
                word_count: l.word_count,
                top_label: c.top_label.clone(),
                text_id: id,
            })
        })
        .collect()
}
