use std::collections::BTreeMap;

use emocirc_core::GOEMOTIONS_LABELS;
use serde::{Deserialize, Serialize};

use crate::error::ClassifierError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextItem {
    pub id: String,
    pub text: String,
}

impl TextItem {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            text: text.into(),
        }
    }
}

/// Prediction for one text: the top label and the full distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifierResult {
    pub text_id: String,
    pub top_label: String,
    pub scores: BTreeMap<String, f64>,
}

impl ClassifierResult {
    /// Validates the distribution (exactly the 28 labels, each in `[0, 1]`)
    /// and takes the argmax, breaking ties toward the lexicographically
    /// smallest label.
    pub fn from_scores(
        text_id: impl Into<String>,
        scores: BTreeMap<String, f64>,
    ) -> Result<Self, ClassifierError> {
        if scores.len() != GOEMOTIONS_LABELS.len()
            || GOEMOTIONS_LABELS.iter().any(|l| !scores.contains_key(*l))
        {
            return Err(ClassifierError::InvalidResult(format!(
                "scores must cover exactly the 28 GoEmotions labels, got {:?}",
                scores.keys().collect::<Vec<_>>()
            )));
        }
        if let Some((l, s)) = scores.iter().find(|(_, s)| !(0.0..=1.0).contains(*s)) {
            return Err(ClassifierError::InvalidResult(format!(
                "score for {l} is {s}, outside [0, 1]"
            )));
        }
        // BTreeMap iterates in lexicographic order; keep the first maximum
        let mut best: Option<(&String, f64)> = None;
        for (label, &s) in &scores {
            if best.is_none_or(|(_, b)| s > b) {
                best = Some((label, s));
            }
        }
        let top_label = best.expect("28 scores").0.clone();
        Ok(Self {
            text_id: text_id.into(),
            top_label,
            scores,
        })
    }

    /// All mass on one label.
    pub fn one_hot(text_id: impl Into<String>, label: &str) -> Result<Self, ClassifierError> {
        let scores = GOEMOTIONS_LABELS
            .iter()
            .map(|l| (l.to_string(), if *l == label { 1.0 } else { 0.0 }))
            .collect();
        Self::from_scores(text_id, scores)
    }
}

/// One line of `classifications.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationLine {
    pub run_id: String,
    pub text_id: String,
    pub top_label: String,
    pub scores: BTreeMap<String, f64>,
    pub service_model_version: String,
}

impl ClassificationLine {
    pub fn new(run_id: &str, result: &ClassifierResult, version: &str) -> Self {
        Self {
            run_id: run_id.to_string(),
            text_id: result.text_id.clone(),
            top_label: result.top_label.clone(),
            scores: result.scores.clone(),
            service_model_version: version.to_string(),
        }
    }

    pub fn result(&self) -> ClassifierResult {
        ClassifierResult {
            text_id: self.text_id.clone(),
            top_label: self.top_label.clone(),
            scores: self.scores.clone(),
        }
    }
}
