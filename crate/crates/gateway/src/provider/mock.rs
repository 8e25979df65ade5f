use emocirc_core::vector_to_angle;
use serde_json::json;

use super::{ChatProvider, Completion};
use crate::error::ProviderError;
use crate::request::GenerationRequest;

/// Mood words for the twelve 30-degree sectors, starting at 0 degrees. Each
/// is a keyword of the stub classifier whose label lies nearest that sector,
/// except at 270 degrees where no label lies close and the word is neutral.
pub const MOCK_KEYWORDS: [&str; 12] = [
    "joyful",
    "proud",
    "crave",
    "nervous",
    "terrified",
    "disgusting",
    "heartbroken",
    "disappointed",
    "regret",
    "sleepy",
    "relieved",
    "cherish",
];

/// Offline provider whose answer names a mood derived from the target state.
///
/// The sector is `round(angle / 30) + shift + (question_id - 1) * question_shift`
/// modulo 12; `shift = question_shift = 0` mirrors the target.
#[derive(Debug, Clone, Default)]
pub struct MockProvider {
    shift: i64,
    question_shift: i64,
}

impl MockProvider {
    pub fn new(shift: i64, question_shift: i64) -> Self {
        Self {
            shift,
            question_shift,
        }
    }

    pub fn sector(&self, angle_deg: f64, question_id: u32) -> usize {
        let base = (angle_deg / 30.0).round() as i64;
        let s = base + self.shift + (question_id as i64 - 1) * self.question_shift;
        s.rem_euclid(12) as usize
    }
}

impl ChatProvider for MockProvider {
    fn complete(&self, req: &GenerationRequest) -> Result<Completion, ProviderError> {
        let angle = vector_to_angle(&req.target)
            .map_err(|e| ProviderError::Client {
                status: 400,
                body: e.to_string(),
            })?
            .degrees();
        let sector = self.sector(angle, req.bundle.question_id);
        let text = format!(
            "You asked: {} Speaking for myself, I feel {} about it.",
            req.bundle.user_text, MOCK_KEYWORDS[sector]
        );
        let mut metadata = serde_json::Map::new();
        metadata.insert("mock_sector".into(), json!(sector));
        Ok(Completion { text, metadata })
    }

    fn is_remote(&self) -> bool {
        false
    }
}
