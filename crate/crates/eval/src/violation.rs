use regex::{Regex, RegexBuilder};

use crate::error::EvalError;

pub const DEFAULT_VIOLATION_PATTERNS: [&str; 3] = ["language model", "as an AI", "I am an AI"];

/// Flags answers that step out of the assigned role.
#[derive(Debug, Clone)]
pub struct ViolationDetector {
    patterns: Vec<Regex>,
}

impl ViolationDetector {
    /// Each pattern is a literal phrase, matched case-insensitively. Ends
    /// that are word characters must sit on a word boundary.
    pub fn new<S: AsRef<str>>(phrases: &[S]) -> Result<Self, EvalError> {
        let patterns = phrases
            .iter()
            .map(|p| {
                RegexBuilder::new(&bounded(p.as_ref()))
                    .case_insensitive(true)
                    .build()
                    .map_err(|e| EvalError::Plan(format!("violation pattern: {e}")))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { patterns })
    }

    pub fn is_violation(&self, text: &str) -> bool {
        self.patterns.iter().any(|p| p.is_match(text))
    }
}

impl Default for ViolationDetector {
    fn default() -> Self {
        Self::new(&DEFAULT_VIOLATION_PATTERNS).expect("default patterns compile")
    }
}

fn bounded(phrase: &str) -> String {
    let word = |c: Option<char>| c.is_some_and(|c| c.is_alphanumeric() || c == '_');
    let head = if word(phrase.chars().next()) { r"\b" } else { "" };
    let tail = if word(phrase.chars().last()) { r"\b" } else { "" };
    format!("{head}{}{tail}", regex::escape(phrase))
}

pub fn detect_role_violation(text: &str) -> bool {
    ViolationDetector::default().is_violation(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_patterns() {
        assert!(detect_role_violation("I'm just a language model, after all."));
        assert!(!detect_role_violation("Freedom means choice."));
        assert!(detect_role_violation("As an AI, I cannot feel."));
        assert!(detect_role_violation("honestly, i am an ai."));
        assert!(!detect_role_violation("She has a brain."));
        assert!(!detect_role_violation("Languages modeled on Latin"));
    }

    #[test]
    fn custom_phrases_are_literal() {
        let d = ViolationDetector::new(&["c++ model"]).unwrap();
        assert!(d.is_violation("A C++ model of me"));
        assert!(!d.is_violation("ccc model"));
    }
}
