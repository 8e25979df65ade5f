use std::path::Path;

use emocirc_core::{fmt3, AffectVector};
use serde::{Deserialize, Serialize};

use crate::error::GatewayError;

/// Line separating the system part of a template file from the user part.
pub const USER_SEPARATOR: &str = "=== user ===";

const STATE_UNIT_TOLERANCE: f64 = 1e-6;

/// System and user message templates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    pub system: String,
    pub user: String,
}

impl PromptTemplate {
    pub fn new(system: impl Into<String>, user: impl Into<String>) -> Self {
        Self {
            system: system.into(),
            user: user.into(),
        }
    }

    /// Parses a template file. Text before a `=== user ===` line is the
    /// system template and text after it the user template; without the
    /// separator the user template is just `{question}`.
    pub fn parse(src: &str) -> Self {
        let mut system = Vec::new();
        let mut user = Vec::new();
        let mut in_user = false;
        for line in src.lines() {
            if !in_user && line.trim() == USER_SEPARATOR {
                in_user = true;
            } else if in_user {
                user.push(line);
            } else {
                system.push(line);
            }
        }
        let system = system.join("\n").trim_end().to_string();
        let user = if in_user {
            user.join("\n").trim().to_string()
        } else {
            "{question}".to_string()
        };
        Self { system, user }
    }

    pub fn load(path: &Path) -> Result<Self, GatewayError> {
        std::fs::read_to_string(path)
            .map(|s| Self::parse(&s))
            .map_err(|e| GatewayError::Template(format!("{}: {e}", path.display())))
    }

    pub fn default_numeric() -> Self {
        Self::parse(include_str!("../../../data/templates/numeric.txt"))
    }

    pub fn default_word() -> Self {
        Self::parse(include_str!("../../../data/templates/word.txt"))
    }

    fn contains(&self, placeholder: &str) -> bool {
        self.system.contains(placeholder) || self.user.contains(placeholder)
    }
}

/// How the emotional state is stated in the prompt.
#[derive(Debug, Clone, PartialEq)]
pub enum EmotionSpec {
    /// Valence and arousal values on the unit circle.
    Numeric(AffectVector),
    /// A single emotion word.
    Word(String),
}

/// A fully rendered prompt.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PromptBundle {
    pub system_text: String,
    pub user_text: String,
    /// (valence, arousal) for numeric prompts.
    pub state: Option<(f64, f64)>,
    pub emotion_word: Option<String>,
    pub question_id: u32,
}

pub fn render_prompt(
    template: &PromptTemplate,
    spec: &EmotionSpec,
    question_id: u32,
    question: &str,
) -> Result<PromptBundle, GatewayError> {
    let required: &[&str] = match spec {
        EmotionSpec::Numeric(_) => &["{arousal}", "{valence}", "{question}"],
        EmotionSpec::Word(_) => &["{emotion_word}", "{question}"],
    };
    if let Some(missing) = required.iter().find(|p| !template.contains(p)) {
        return Err(GatewayError::Template(format!("missing placeholder {missing}")));
    }

    let mut subs: Vec<(&str, String)> = vec![("{question}", question.to_string())];
    let (state, emotion_word) = match spec {
        EmotionSpec::Numeric(v) => {
            if !v.is_unit(STATE_UNIT_TOLERANCE) {
                return Err(GatewayError::InvalidState(format!(
                    "state {v} has norm {}, expected 1",
                    v.norm()
                )));
            }
            subs.push(("{arousal}", fmt3(v.arousal())));
            subs.push(("{valence}", fmt3(v.valence())));
            (Some((v.valence(), v.arousal())), None)
        }
        EmotionSpec::Word(w) => {
            if w.trim().is_empty() {
                return Err(GatewayError::InvalidState("empty emotion word".into()));
            }
            subs.push(("{emotion_word}", w.clone()));
            (None, Some(w.clone()))
        }
    };

    let fill = |text: &str| -> Result<String, GatewayError> {
        // substitute in one pass so inserted text is never re-scanned
        let mut out = String::with_capacity(text.len());
        let mut rest = text;
        while let Some(open) = rest.find('{') {
            out.push_str(&rest[..open]);
            let tail = &rest[open..];
            match subs.iter().find(|(p, _)| tail.starts_with(p)) {
                Some((p, value)) => {
                    out.push_str(value);
                    rest = &tail[p.len()..];
                }
                None => {
                    let end = tail.find('}').map(|i| i + 1).unwrap_or(tail.len());
                    return Err(GatewayError::Template(format!(
                        "unfilled placeholder {}",
                        &tail[..end]
                    )));
                }
            }
        }
        out.push_str(rest);
        Ok(out)
    };

    Ok(PromptBundle {
        system_text: fill(&template.system)?,
        user_text: fill(&template.user)?,
        state,
        emotion_word,
        question_id,
    })
}
