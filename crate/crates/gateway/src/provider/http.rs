use std::time::Duration;

use crate::error::ProviderError;

pub(crate) fn agent(timeout: Duration) -> ureq::Agent {
    ureq::Agent::config_builder()
        .timeout_global(Some(timeout))
        .http_status_as_error(false)
        .build()
        .new_agent()
}

/// POSTs a JSON body and returns the response body of a 2xx reply.
pub(crate) fn post_json(
    agent: &ureq::Agent,
    url: &str,
    headers: &[(&str, String)],
    body: &serde_json::Value,
) -> Result<String, ProviderError> {
    let mut req = agent.post(url).header("content-type", "application/json");
    for (name, value) in headers {
        req = req.header(*name, value.as_str());
    }
    let mut resp = req
        .send(body.to_string())
        .map_err(|e| ProviderError::Transport(e.to_string()))?;
    let status = resp.status().as_u16();
    let text = resp
        .body_mut()
        .read_to_string()
        .map_err(|e| ProviderError::Transport(e.to_string()))?;
    if (200..300).contains(&status) {
        Ok(text)
    } else {
        Err(ProviderError::from_status(status, text))
    }
}

pub(crate) fn parse_json(raw: &str) -> Result<serde_json::Value, ProviderError> {
    serde_json::from_str(raw).map_err(|e| ProviderError::Malformed {
        reason: format!("invalid JSON: {e}"),
        raw: raw.to_string(),
    })
}

pub(crate) fn non_empty(text: Option<String>, raw: &str) -> Result<String, ProviderError> {
    match text {
        Some(t) if !t.trim().is_empty() => Ok(t),
        Some(_) => Err(ProviderError::Malformed {
            reason: "empty completion text".into(),
            raw: raw.to_string(),
        }),
        None => Err(ProviderError::Malformed {
            reason: "no completion text in response".into(),
            raw: raw.to_string(),
        }),
    }
}
