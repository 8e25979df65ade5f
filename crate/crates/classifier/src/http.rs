use std::collections::BTreeMap;
use std::time::Duration;

use emocirc_core::GOEMOTIONS_LABELS;
use serde::Deserialize;
use serde_json::json;

use crate::error::ClassifierError;
use crate::result::{ClassifierResult, TextItem};
use crate::Classifier;

#[derive(Debug, Clone)]
pub struct HttpClassifierOptions {
    pub batch_size: usize,
    pub timeout: Duration,
    pub max_retries: u32,
    pub retry_delay: Duration,
}

impl Default for HttpClassifierOptions {
    fn default() -> Self {
        Self {
            batch_size: 64,
            timeout: Duration::from_secs(30),
            max_retries: 3,
            retry_delay: Duration::from_millis(500),
        }
    }
}

/// What the service reports about itself.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceInfo {
    pub model_id: String,
    pub label_list: Vec<String>,
    pub version: String,
}

#[derive(Deserialize)]
struct Health {
    status: String,
    #[serde(default)]
    model: String,
    #[serde(default)]
    version: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Labels {
    Bare(Vec<String>),
    Wrapped { labels: Vec<String> },
}

#[derive(Deserialize)]
struct ClassifyResponse {
    results: Vec<WireResult>,
}

#[derive(Deserialize)]
struct WireResult {
    #[allow(dead_code)]
    label: String,
    scores: BTreeMap<String, f64>,
}

/// Client for the classifier service (`/v1/health`, `/v1/labels`, `/v1/classify`).
pub struct HttpClassifier {
    base_url: String,
    options: HttpClassifierOptions,
    agent: ureq::Agent,
    info: ServiceInfo,
}

impl HttpClassifier {
    /// Probes health and checks the service's label set against the local
    /// GoEmotions list before any text is sent.
    pub fn connect(base_url: &str, options: HttpClassifierOptions) -> Result<Self, ClassifierError> {
        let agent = ureq::Agent::config_builder()
            .timeout_global(Some(options.timeout))
            .http_status_as_error(false)
            .build()
            .new_agent();
        let base_url = base_url.trim_end_matches('/').to_string();
        let mut client = Self {
            base_url,
            options,
            agent,
            info: ServiceInfo {
                model_id: String::new(),
                label_list: Vec::new(),
                version: String::new(),
            },
        };

        let health: Health = client.with_retries(|| client.get("/v1/health"))?;
        if health.status != "ok" {
            return Err(ClassifierError::Unavailable(format!("status {}", health.status)));
        }
        let labels = match client.with_retries(|| client.get::<Labels>("/v1/labels"))? {
            Labels::Bare(l) | Labels::Wrapped { labels: l } => l,
        };
        let mut got = labels.clone();
        got.sort();
        let mut want: Vec<String> = GOEMOTIONS_LABELS.iter().map(|s| s.to_string()).collect();
        want.sort();
        if got != want {
            return Err(ClassifierError::LabelMismatch(format!("service reports {labels:?}")));
        }
        client.info = ServiceInfo {
            version: health.version.unwrap_or_else(|| health.model.clone()),
            model_id: health.model,
            label_list: labels,
        };
        Ok(client)
    }

    pub fn info(&self) -> &ServiceInfo {
        &self.info
    }

    fn decode<T: serde::de::DeserializeOwned>(
        &self,
        resp: Result<ureq::http::Response<ureq::Body>, ureq::Error>,
    ) -> Result<T, ClassifierError> {
        let mut resp = resp.map_err(|e| ClassifierError::Transport(e.to_string()))?;
        let status = resp.status().as_u16();
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| ClassifierError::Transport(e.to_string()))?;
        match status {
            200..=299 => serde_json::from_str(&body)
                .map_err(|e| ClassifierError::Protocol(format!("{e}; body: {body}"))),
            503 => Err(ClassifierError::Unavailable(body)),
            500..=599 => Err(ClassifierError::Transport(format!("HTTP {status}: {body}"))),
            _ => Err(ClassifierError::Protocol(format!("HTTP {status}: {body}"))),
        }
    }

    fn get<T: serde::de::DeserializeOwned>(&self, path: &str) -> Result<T, ClassifierError> {
        self.decode(self.agent.get(format!("{}{path}", self.base_url)).call())
    }

    fn with_retries<T>(
        &self,
        mut f: impl FnMut() -> Result<T, ClassifierError>,
    ) -> Result<T, ClassifierError> {
        let mut attempt = 0;
        loop {
            match f() {
                Err(e) if e.is_retryable() && attempt < self.options.max_retries => {
                    std::thread::sleep(self.options.retry_delay * 2u32.pow(attempt));
                    attempt += 1;
                }
                other => return other,
            }
        }
    }

    fn classify_batch(&self, batch: &[TextItem]) -> Result<Vec<ClassifierResult>, ClassifierError> {
        let body = json!({ "texts": batch.iter().map(|t| t.text.as_str()).collect::<Vec<_>>() });
        let url = format!("{}/v1/classify", self.base_url);
        let resp: ClassifyResponse = self.with_retries(|| {
            self.decode(
                self.agent
                    .post(&url)
                    .header("content-type", "application/json")
                    .send(body.to_string()),
            )
        })?;
        if resp.results.len() != batch.len() {
            return Err(ClassifierError::Protocol(format!(
                "sent {} texts, got {} results",
                batch.len(),
                resp.results.len()
            )));
        }
        batch
            .iter()
            .zip(resp.results)
            .map(|(item, r)| ClassifierResult::from_scores(item.id.clone(), r.scores))
            .collect()
    }
}

impl Classifier for HttpClassifier {
    fn classify(&self, items: &[TextItem]) -> Result<Vec<ClassifierResult>, ClassifierError> {
        let mut out = Vec::with_capacity(items.len());
        for batch in items.chunks(self.options.batch_size.max(1)) {
            out.extend(self.classify_batch(batch)?);
        }
        Ok(out)
    }

    fn model_version(&self) -> String {
        self.info.version.clone()
    }
}
