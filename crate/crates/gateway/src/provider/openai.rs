use std::time::Duration;

use serde_json::{json, Value};

use super::http::{agent, non_empty, parse_json, post_json};
use super::{ChatProvider, Completion};
use crate::error::ProviderError;
use crate::request::GenerationRequest;

/// OpenAI chat completions, also used for self-hosted compatible servers.
pub struct OpenAiChat {
    base_url: String,
    api_key: Option<String>,
    agent: ureq::Agent,
}

impl OpenAiChat {
    pub fn new(base_url: String, api_key: Option<String>, timeout: Duration) -> Self {
        Self {
            base_url,
            api_key,
            agent: agent(timeout),
        }
    }

    pub(crate) fn body(req: &GenerationRequest) -> Value {
        let mut body = json!({
            "model": req.model,
            "messages": [
                {"role": "system", "content": req.bundle.system_text},
                {"role": "user", "content": req.bundle.user_text},
            ],
        });
        let obj = body.as_object_mut().expect("object literal");
        for (k, v) in &req.params.0 {
            obj.insert(k.clone(), v.clone());
        }
        body
    }

    pub(crate) fn parse(raw: &str) -> Result<Completion, ProviderError> {
        let v = parse_json(raw)?;
        let choice = &v["choices"][0];
        let text = choice["message"]["content"].as_str().map(String::from);
        let text = non_empty(text, raw)?;
        let mut metadata = serde_json::Map::new();
        for key in ["id", "model", "usage", "system_fingerprint"] {
            if let Some(x) = v.get(key).filter(|x| !x.is_null()) {
                metadata.insert(key.to_string(), x.clone());
            }
        }
        if let Some(reason) = choice.get("finish_reason").filter(|x| !x.is_null()) {
            metadata.insert("finish_reason".into(), reason.clone());
        }
        Ok(Completion { text, metadata })
    }
}

impl ChatProvider for OpenAiChat {
    fn complete(&self, req: &GenerationRequest) -> Result<Completion, ProviderError> {
        let mut headers = Vec::new();
        if let Some(key) = &self.api_key {
            headers.push(("authorization", format!("Bearer {key}")));
        }
        let url = format!("{}/chat/completions", self.base_url);
        let raw = post_json(&self.agent, &url, &headers, &Self::body(req))?;
        Self::parse(&raw)
    }
}
