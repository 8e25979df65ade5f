use std::fmt;

use emocirc_core::{state_grid, AffectVector, WordStates};
use emocirc_gateway::{EmotionSpec, PromptTemplate, SamplingParams};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::EvalError;

/// The ten default open-ended questions, in order.
pub const DEFAULT_QUESTIONS: [&str; 10] = [
    "What does the future hold for AI and mankind?",
    "How do you view the balance between work and personal life?",
    "How do you feel about the role of social media in our lives?",
    "How do you feel about the unpredictability of the weather?",
    "What are your thoughts on the importance of art in society?",
    "What's your stance on the preservation of nature versus urban development?",
    "How do you define happiness?",
    "How do you handle difficult emotions?",
    "What does freedom mean to you?",
    "How do you stay motivated during tough times?",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptMode {
    /// State given as valence/arousal numbers.
    #[default]
    Numeric,
    /// State given as an emotion word.
    Word,
}

impl fmt::Display for PromptMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Numeric => "numeric",
            Self::Word => "word",
        })
    }
}

impl std::str::FromStr for PromptMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "numeric" => Ok(Self::Numeric),
            "word" => Ok(Self::Word),
            other => Err(format!("mode must be numeric or word, not `{other}`")),
        }
    }
}

/// A model under test, addressed through a configured provider entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub provider_id: String,
    pub model: String,
    #[serde(default)]
    pub params: SamplingParams,
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub models: Vec<ModelSpec>,
    pub questions: Vec<String>,
    pub mode: PromptMode,
    pub n_states: usize,
    pub word_list: WordStates,
    pub repeats: u32,
    pub template: PromptTemplate,
    pub max_retries: u32,
}

/// One (model, state, question, repeat) combination to generate.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub model: usize,
    pub state: usize,
    pub question_id: u32,
    pub sample: u32,
    pub target: AffectVector,
    pub spec: EmotionSpec,
}

impl ExperimentPlan {
    /// Numeric-mode plan over the default questions and 12 states.
    pub fn numeric(models: Vec<ModelSpec>) -> Self {
        Self {
            models,
            questions: DEFAULT_QUESTIONS.iter().map(|q| q.to_string()).collect(),
            mode: PromptMode::Numeric,
            n_states: 12,
            word_list: WordStates::shipped(),
            repeats: 1,
            template: PromptTemplate::default_numeric(),
            max_retries: 3,
        }
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        if self.models.is_empty() {
            return Err(EvalError::Plan("no models".into()));
        }
        if self.questions.is_empty() {
            return Err(EvalError::Plan("no questions".into()));
        }
        if self.repeats == 0 {
            return Err(EvalError::Plan("repeats must be at least 1".into()));
        }
        if self.mode == PromptMode::Word && self.word_list.entries().is_empty() {
            return Err(EvalError::Plan("word mode needs a word list".into()));
        }
        self.states()?;
        Ok(())
    }

    fn states(&self) -> Result<Vec<(AffectVector, EmotionSpec)>, EvalError> {
        Ok(match self.mode {
            PromptMode::Numeric => state_grid(self.n_states)?
                .into_iter()
                .map(|v| (v, EmotionSpec::Numeric(v)))
                .collect(),
            PromptMode::Word => self
                .word_list
                .entries()
                .iter()
                .map(|(w, v)| (*v, EmotionSpec::Word(w.clone())))
                .collect(),
        })
    }

    /// Cells in canonical order: model, then state, then question, then repeat.
    pub fn cells(&self) -> Result<Vec<Cell>, EvalError> {
        self.validate()?;
        let states = self.states()?;
        let mut cells = Vec::new();
        for model in 0..self.models.len() {
            for (state, (target, spec)) in states.iter().enumerate() {
                for q in 0..self.questions.len() {
                    for sample in 0..self.repeats {
                        cells.push(Cell {
                            model,
                            state,
                            question_id: q as u32 + 1,
                            sample,
                            target: *target,
                            spec: spec.clone(),
                        });
                    }
                }
            }
        }
        Ok(cells)
    }

    /// Expected record count.
    pub fn cell_count(&self) -> usize {
        let states = match self.mode {
            PromptMode::Numeric => self.n_states,
            PromptMode::Word => self.word_list.entries().len(),
        };
        states * self.questions.len() * self.models.len() * self.repeats as usize
    }

    /// SHA-256 of everything that determines the prompts sent.
    pub fn hash(&self) -> String {
        let words: Vec<_> = self
            .word_list
            .entries()
            .iter()
            .map(|(w, v)| (w.clone(), v.valence(), v.arousal()))
            .collect();
        let canonical = serde_json::json!({
            "models": self.models,
            "questions": self.questions,
            "mode": self.mode,
            "n_states": self.n_states,
            "words": if self.mode == PromptMode::Word { serde_json::to_value(words).unwrap() } else { serde_json::Value::Null },
            "repeats": self.repeats,
            "template": [self.template.system, self.template.user],
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }
}
