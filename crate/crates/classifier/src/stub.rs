use emocirc_core::NEUTRAL;

use crate::error::ClassifierError;
use crate::result::{ClassifierResult, TextItem};
use crate::Classifier;

pub const STUB_VERSION: &str = "stub-keywords-v1";

/// Keyword rules checked in order; the first keyword present as a whole word
/// (case-insensitive) decides the label. No match means neutral.
pub const STUB_RULES: &[(&str, &str)] = &[
    ("furious", "anger"),
    ("thrilled", "excitement"),
    ("hilarious", "amusement"),
    ("admire", "admiration"),
    ("annoying", "annoyance"),
    ("approve", "approval"),
    ("cherish", "caring"),
    ("confused", "confusion"),
    ("curious", "curiosity"),
    ("crave", "desire"),
    ("disappointed", "disappointment"),
    ("disapprove", "disapproval"),
    ("disgusting", "disgust"),
    ("embarrassed", "embarrassment"),
    ("terrified", "fear"),
    ("grateful", "gratitude"),
    ("heartbroken", "grief"),
    ("joyful", "joy"),
    ("love", "love"),
    ("nervous", "nervousness"),
    ("hopeful", "optimism"),
    ("proud", "pride"),
    ("realize", "realization"),
    ("relieved", "relief"),
    ("regret", "remorse"),
    ("sad", "sadness"),
    ("surprised", "surprise"),
];

fn words(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphabetic())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Deterministic keyword classification of one text.
pub fn stub_classify(text: &str) -> ClassifierResult {
    let words = words(text);
    let label = STUB_RULES
        .iter()
        .find(|(kw, _)| words.iter().any(|w| w == kw))
        .map(|(_, label)| *label)
        .unwrap_or(NEUTRAL);
    ClassifierResult::one_hot("", label).expect("stub labels are GoEmotions labels")
}

/// [`stub_classify`] behind the [`Classifier`] interface.
#[derive(Debug, Clone, Copy, Default)]
pub struct StubClassifier;

impl Classifier for StubClassifier {
    fn classify(&self, items: &[TextItem]) -> Result<Vec<ClassifierResult>, ClassifierError> {
        Ok(items
            .iter()
            .map(|item| ClassifierResult {
                text_id: item.id.clone(),
                ..stub_classify(&item.text)
            })
            .collect())
    }

    fn model_version(&self) -> String {
        STUB_VERSION.to_string()
    }
}
