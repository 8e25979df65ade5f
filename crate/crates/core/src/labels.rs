/// The 28 GoEmotions labels, in the dataset's id order (`neutral` = 27).
pub const GOEMOTIONS_LABELS: [&str; 28] = [
    "admiration",
    "amusement",
    "anger",
    "annoyance",
    "approval",
    "caring",
    "confusion",
    "curiosity",
    "desire",
    "disappointment",
    "disapproval",
    "disgust",
    "embarrassment",
    "excitement",
    "fear",
    "gratitude",
    "grief",
    "joy",
    "love",
    "nervousness",
    "optimism",
    "pride",
    "realization",
    "relief",
    "remorse",
    "sadness",
    "surprise",
    "neutral",
];

pub const NEUTRAL: &str = "neutral";

/// Dataset id of a label, if it is one of the 28.
pub fn label_id(label: &str) -> Option<usize> {
    GOEMOTIONS_LABELS.iter().position(|l| *l == label)
}

pub fn is_goemotions_label(label: &str) -> bool {
    label_id(label).is_some()
}
