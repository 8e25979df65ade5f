use std::collections::{HashMap, HashSet};
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Condvar, Mutex};

use chrono::Utc;

use crate::cache::{cache_key, CachedResponse, ResponseCache};
use crate::error::{GatewayError, ProviderError};
use crate::provider::{build_provider, ChatProvider, ProviderConfig};
use crate::request::{word_count, GenerationRecord, GenerationRequest};
use crate::retry::RetryPolicy;

/// Counting semaphore bounding in-flight calls to one provider.
struct Limiter {
    free: Mutex<usize>,
    cv: Condvar,
}

struct Permit<'a>(&'a Limiter);

impl Limiter {
    fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n.max(1)),
            cv: Condvar::new(),
        }
    }

    fn acquire(&self) -> Permit<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        Permit(self)
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

/// Keys currently being generated, so identical concurrent requests wait for
/// the first one and then read its cached answer.
#[derive(Default)]
struct InFlight {
    keys: Mutex<HashSet<String>>,
    cv: Condvar,
}

struct Claim<'a> {
    owner: &'a InFlight,
    key: String,
}

impl InFlight {
    fn claim(&self, key: &str) -> Claim<'_> {
        let mut keys = self.keys.lock().unwrap();
        while keys.contains(key) {
            keys = self.cv.wait(keys).unwrap();
        }
        keys.insert(key.to_string());
        Claim {
            owner: self,
            key: key.to_string(),
        }
    }
}

impl Drop for Claim<'_> {
    fn drop(&mut self) {
        self.owner.keys.lock().unwrap().remove(&self.key);
        self.owner.cv.notify_all();
    }
}

/// Appends records to `generations.jsonl`, one complete line at a time.
pub struct LogWriter {
    run_id: String,
    out: Mutex<BufWriter<File>>,
}

impl LogWriter {
    pub fn append_to(path: &Path, run_id: &str) -> std::io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            run_id: run_id.to_string(),
            out: Mutex::new(BufWriter::new(file)),
        })
    }

    pub fn write(&self, record: &GenerationRecord) -> std::io::Result<()> {
        let mut line = serde_json::to_string(&record.to_log_line(&self.run_id))?;
        line.push('\n');
        let mut out = self.out.lock().unwrap();
        out.write_all(line.as_bytes())?;
        out.flush()
    }
}

struct Slot {
    provider: Arc<dyn ChatProvider>,
    limiter: Limiter,
}

/// Thread-safe entry point for generation requests.
pub struct Gateway {
    slots: HashMap<String, Slot>,
    cache: Option<ResponseCache>,
    log: Option<LogWriter>,
    retry: RetryPolicy,
    offline: bool,
    inflight: InFlight,
    provider_calls: AtomicUsize,
}

#[derive(Default)]
pub struct GatewayBuilder {
    slots: HashMap<String, Slot>,
    cache: Option<ResponseCache>,
    log: Option<LogWriter>,
    retry: RetryPolicy,
    offline: bool,
}

impl GatewayBuilder {
    pub fn provider(mut self, id: &str, provider: Arc<dyn ChatProvider>, max_concurrency: usize) -> Self {
        self.slots.insert(
            id.to_string(),
            Slot {
                provider,
                limiter: Limiter::new(max_concurrency),
            },
        );
        self
    }

    pub fn configured(self, cfg: &ProviderConfig) -> Result<Self, GatewayError> {
        let provider = build_provider(cfg)?;
        Ok(self.provider(&cfg.id, provider, cfg.max_concurrency))
    }

    pub fn cache(mut self, cache: ResponseCache) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn log(mut self, log: LogWriter) -> Self {
        self.log = Some(log);
        self
    }

    pub fn retry(mut self, retry: RetryPolicy) -> Self {
        self.retry = retry;
        self
    }

    /// Only cached answers and in-process providers are allowed.
    pub fn offline(mut self, offline: bool) -> Self {
        self.offline = offline;
        self
    }

    pub fn build(self) -> Gateway {
        Gateway {
            slots: self.slots,
            cache: self.cache,
            log: self.log,
            retry: self.retry,
            offline: self.offline,
            inflight: InFlight::default(),
            provider_calls: AtomicUsize::new(0),
        }
    }
}

impl Gateway {
    pub fn builder() -> GatewayBuilder {
        GatewayBuilder::default()
    }

    pub fn has_provider(&self, id: &str) -> bool {
        self.slots.contains_key(id)
    }

    /// Provider calls made so far, retries included.
    pub fn provider_calls(&self) -> usize {
        self.provider_calls.load(Ordering::SeqCst)
    }

    /// Answers a request from the cache or the provider, then appends the
    /// record to the generations log before returning it.
    pub fn generate(&self, req: &GenerationRequest) -> Result<GenerationRecord, GatewayError> {
        let slot = self
            .slots
            .get(&req.provider_id)
            .ok_or_else(|| GatewayError::UnknownProvider(req.provider_id.clone()))?;
        let key = cache_key(req);
        let _claim = self.inflight.claim(&key);

        let (response, cache_hit) = match self.cache.as_ref().and_then(|c| c.get(&key)) {
            Some(hit) => (hit, true),
            None => {
                if self.offline && slot.provider.is_remote() {
                    return Err(GatewayError::Config(format!(
                        "offline and no cached answer for {} / {} question {}",
                        req.provider_id, req.model, req.bundle.question_id
                    )));
                }
                let fresh = self.call_with_retries(slot, req)?;
                if let Some(cache) = &self.cache {
                    cache.put(&key, &fresh).map_err(GatewayError::Cache)?;
                }
                (fresh, false)
            }
        };

        let record = GenerationRecord {
            request: req.clone(),
            word_count: word_count(&response.response_text),
            response_text: response.response_text,
            provider_metadata: response.provider_metadata,
            timestamp: Utc::now(),
            cache_hit,
        };
        if let Some(log) = &self.log {
            log.write(&record).map_err(GatewayError::Log)?;
        }
        Ok(record)
    }

    fn call_with_retries(&self, slot: &Slot, req: &GenerationRequest) -> Result<CachedResponse, GatewayError> {
        let mut retries = 0u32;
        loop {
            let outcome = {
                let _permit = slot.limiter.acquire();
                self.provider_calls.fetch_add(1, Ordering::SeqCst);
                slot.provider.complete(req)
            };
            let err = match outcome {
                Ok(c) if c.text.trim().is_empty() => ProviderError::Malformed {
                    reason: "empty completion text".into(),
                    raw: c.text,
                },
                Ok(c) => {
                    let mut metadata = c.metadata;
                    metadata.insert("retries".into(), retries.into());
                    return Ok(CachedResponse {
                        response_text: c.text,
                        provider_metadata: metadata,
                    });
                }
                Err(e) => e,
            };
            if !err.is_retryable() {
                return Err(GatewayError::Provider(err));
            }
            if retries >= req.max_retries {
                return Err(GatewayError::Exhausted {
                    attempts: retries + 1,
                    last: err,
                });
            }
            std::thread::sleep(self.retry.delay(retries));
            retries += 1;
        }
    }
}
