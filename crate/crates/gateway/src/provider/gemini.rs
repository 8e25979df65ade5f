use std::time::Duration;

use serde_json::{json, Value};

use super::http::{agent, non_empty, parse_json, post_json};
use super::{ChatProvider, Completion};
use crate::error::ProviderError;
use crate::request::GenerationRequest;

/// Gemini `generateContent`; the system prompt goes in `systemInstruction`.
pub struct GeminiChat {
    base_url: String,
    api_key: String,
    agent: ureq::Agent,
}

impl GeminiChat {
    pub fn new(base_url: String, api_key: String, timeout: Duration) -> Self {
        Self {
            base_url,
            api_key,
            agent: agent(timeout),
        }
    }

    pub(crate) fn body(req: &GenerationRequest) -> Value {
        let mut body = json!({
            "systemInstruction": {"parts": [{"text": req.bundle.system_text}]},
            "contents": [{"role": "user", "parts": [{"text": req.bundle.user_text}]}],
        });
        if !req.params.is_empty() {
            body["generationConfig"] = serde_json::to_value(&req.params).expect("params serialize");
        }
        body
    }

    pub(crate) fn parse(raw: &str) -> Result<Completion, ProviderError> {
        let v = parse_json(raw)?;
        let candidate = &v["candidates"][0];
        let text = candidate["content"]["parts"].as_array().map(|parts| {
            parts
                .iter()
                .filter_map(|p| p["text"].as_str())
                .collect::<Vec<_>>()
                .join("")
        });
        let text = non_empty(text, raw)?;
        let mut metadata = serde_json::Map::new();
        for key in ["modelVersion", "usageMetadata", "responseId"] {
            if let Some(x) = v.get(key) {
                metadata.insert(key.to_string(), x.clone());
            }
        }
        if let Some(reason) = candidate.get("finishReason") {
            metadata.insert("finish_reason".into(), reason.clone());
        }
        Ok(Completion { text, metadata })
    }
}

impl ChatProvider for GeminiChat {
    fn complete(&self, req: &GenerationRequest) -> Result<Completion, ProviderError> {
        let url = format!("{}/models/{}:generateContent", self.base_url, req.model);
        let headers = [("x-goog-api-key", self.api_key.clone())];
        let raw = post_json(&self.agent, &url, &headers, &Self::body(req))?;
        Self::parse(&raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn joins_parts() {
        let raw = r#"{"candidates":[{"content":{"parts":[{"text":"I'm just "},{"text":"a language model, after all."}]},"finishReason":"STOP"}],"modelVersion":"gemini-1.5-flash"}"#;
        let c = GeminiChat::parse(raw).unwrap();
        assert_eq!(c.text, "I'm just a language model, after all.");
        assert_eq!(c.metadata["finish_reason"], "STOP");
    }

    #[test]
    fn blocked_candidate_is_malformed() {
        let raw = r#"{"candidates":[{"finishReason":"SAFETY"}]}"#;
        assert!(matches!(GeminiChat::parse(raw), Err(ProviderError::Malformed { .. })));
    }
}
