//! The completion-endpoint client.
//!
//! Speaks a generic completion-over-HTTP shape: one JSON POST per request,
//! with the prompt field name and the response text path configurable so
//! any vendor-compatible server works. Transient failures (connect errors,
//! 429, 5xx) retry with exponential backoff; everything else surfaces
//! immediately. All calls are funneled through the cassette according to
//! its mode, so a replay run never opens a socket.

use std::sync::{Condvar, Mutex};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::cassette::{Cassette, CassetteEntry, CassetteMode, StoredRequest};

/// Retries after the initial attempt, for transient failures only.
const MAX_RETRIES: u32 = 5;

/// The identity of a request: everything the response may depend on.
/// Endpoint URL and decoding limits are deliberately excluded so a cassette
/// recorded against one server replays against a config pointing anywhere.
pub fn request_hash(model: &str, temperature: f64, prompt: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(model.as_bytes());
    hasher.update([0x1f]);
    hasher.update(temperature.to_le_bytes());
    hasher.update([0x1f]);
    hasher.update(prompt.as_bytes());
    format!("{:x}", hasher.finalize())
}

/// What came back from the model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub text: String,
    /// Total token usage as reported by the endpoint, when it reports one.
    pub total_tokens: Option<u64>,
    pub latency_ms: u64,
}

#[derive(Debug, Error)]
pub enum GatewayError {
    #[error("replay cassette has no entry for request {hash}")]
    CassetteMiss { hash: String },
    #[error("transport failure: {0}")]
    Transport(String),
    #[error("rate limited by the endpoint and retries exhausted")]
    RateLimited,
    #[error("API key environment variable `{0}` is not set")]
    MissingApiKey(String),
    #[error("endpoint response is missing `{path}`: {body}")]
    BadResponse { path: String, body: String },
    #[error(transparent)]
    Cassette(#[from] crate::cassette::CassetteError),
}

/// Connection settings for a completion endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EndpointConfig {
    pub url: String,
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
    /// Name of the environment variable holding the API key; `None` sends
    /// no authorization header.
    pub api_key_env: Option<String>,
    /// JSON field the prompt is posted under.
    pub prompt_field: String,
    /// Dot path to the completion text in the response body; numeric
    /// segments index into arrays.
    pub text_path: String,
    /// Dot path to total token usage; missing values are tolerated.
    pub usage_path: String,
    /// Token-bucket rate limit; `None` disables pacing.
    pub requests_per_minute: Option<u32>,
    /// Concurrent in-flight request cap; `None` means unlimited.
    pub max_in_flight: Option<u32>,
    /// First retry delay; doubles per retry.
    pub retry_base_ms: u64,
    pub timeout_secs: u64,
}

impl Default for EndpointConfig {
    fn default() -> EndpointConfig {
        EndpointConfig {
            url: String::new(),
            model: String::new(),
            temperature: 0.0,
            max_tokens: 512,
            api_key_env: None,
            prompt_field: "prompt".to_string(),
            text_path: "choices.0.text".to_string(),
            usage_path: "usage.total_tokens".to_string(),
            requests_per_minute: None,
            max_in_flight: None,
            retry_base_ms: 200,
            timeout_secs: 120,
        }
    }
}

/// Walk a dot path through a JSON value; numeric segments are array
/// indices.
fn lookup_path<'a>(value: &'a serde_json::Value, path: &str) -> Option<&'a serde_json::Value> {
    let mut cur = value;
    for segment in path.split('.') {
        cur = match segment.parse::<usize>() {
            Ok(index) => cur.get(index)?,
            Err(_) => cur.get(segment)?,
        };
    }
    Some(cur)
}

/// Steady-rate token bucket. Capacity is one burst-second of tokens, so a
/// quiet period never banks more than a second's worth of calls.
struct TokenBucket {
    per_sec: f64,
    tokens: f64,
    last: Instant,
}

impl TokenBucket {
    fn new(per_minute: u32) -> TokenBucket {
        let per_sec = f64::from(per_minute) / 60.0;
        TokenBucket {
            per_sec,
            tokens: per_sec.max(1.0),
            last: Instant::now(),
        }
    }

    fn acquire(&mut self) {
        loop {
            let now = Instant::now();
            self.tokens = (self.tokens + now.duration_since(self.last).as_secs_f64() * self.per_sec)
                .min(self.per_sec.max(1.0));
            self.last = now;
            if self.tokens >= 1.0 {
                self.tokens -= 1.0;
                return;
            }
            let wait = (1.0 - self.tokens) / self.per_sec;
            std::thread::sleep(Duration::from_secs_f64(wait));
        }
    }
}

/// Counting semaphore for the in-flight cap.
struct Slots {
    free: Mutex<u32>,
    released: Condvar,
}

impl Slots {
    fn new(max: u32) -> Slots {
        Slots {
            free: Mutex::new(max.max(1)),
            released: Condvar::new(),
        }
    }

    fn acquire(&self) -> SlotGuard<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.released.wait(free).unwrap();
        }
        *free -= 1;
        SlotGuard { slots: self }
    }
}

struct SlotGuard<'a> {
    slots: &'a Slots,
}

impl Drop for SlotGuard<'_> {
    fn drop(&mut self) {
        *self.slots.free.lock().unwrap() += 1;
        self.slots.released.notify_one();
    }
}

/// A thread-safe completion client bound to one cassette.
pub struct Gateway {
    config: EndpointConfig,
    cassette: Mutex<Cassette>,
    http: reqwest::blocking::Client,
    bucket: Option<Mutex<TokenBucket>>,
    slots: Option<Slots>,
}

impl Gateway {
    pub fn new(config: EndpointConfig, cassette: Cassette) -> Gateway {
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(config.timeout_secs))
            .build()
            .expect("HTTP client construction cannot fail with static options");
        Gateway {
            bucket: config.requests_per_minute.map(|r| Mutex::new(TokenBucket::new(r))),
            slots: config.max_in_flight.map(Slots::new),
            config,
            cassette: Mutex::new(cassette),
            http,
        }
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.config
    }

    /// The hash [`complete`](Gateway::complete) will file this prompt
    /// under.
    pub fn hash_for(&self, prompt: &str) -> String {
        request_hash(&self.config.model, self.config.temperature, prompt)
    }

    /// Complete a prompt, honoring the cassette mode: replay answers from
    /// the store alone, record calls once per novel request and persists,
    /// passthrough always calls and never persists.
    pub fn complete(&self, prompt: &str) -> Result<CompletionResponse, GatewayError> {
        let hash = self.hash_for(prompt);
        let mode = {
            let cassette = self.cassette.lock().unwrap();
            match cassette.mode() {
                CassetteMode::Replay => {
                    return match cassette.get(&hash) {
                        Some(entry) => Ok(entry.response.clone()),
                        None => Err(GatewayError::CassetteMiss { hash }),
                    };
                }
                CassetteMode::Record => {
                    if let Some(entry) = cassette.get(&hash) {
                        return Ok(entry.response.clone());
                    }
                }
                CassetteMode::Passthrough => {}
            }
            cassette.mode()
        };

        let response = self.call_endpoint(prompt)?;
        if mode == CassetteMode::Record {
            self.cassette.lock().unwrap().put(CassetteEntry {
                hash,
                request: StoredRequest {
                    model: self.config.model.clone(),
                    temperature: self.config.temperature,
                    prompt: prompt.to_string(),
                },
                response: response.clone(),
            })?;
        }
        Ok(response)
    }

    fn call_endpoint(&self, prompt: &str) -> Result<CompletionResponse, GatewayError> {
        let _slot = self.slots.as_ref().map(Slots::acquire);
        let key = match &self.config.api_key_env {
            Some(var) => Some(
                std::env::var(var).map_err(|_| GatewayError::MissingApiKey(var.clone()))?,
            ),
            None => None,
        };
        let mut body = serde_json::json!({
            "model": self.config.model,
            "temperature": self.config.temperature,
            "max_tokens": self.config.max_tokens,
        });
        body[&self.config.prompt_field] = serde_json::Value::String(prompt.to_string());

        let mut delay = Duration::from_millis(self.config.retry_base_ms);
        let mut last = GatewayError::Transport("no attempt made".to_string());
        for attempt in 0..=MAX_RETRIES {
            if attempt > 0 {
                std::thread::sleep(delay);
                delay *= 2;
            }
            if let Some(bucket) = &self.bucket {
                bucket.lock().unwrap().acquire();
            }
            let started = Instant::now();
            let mut request = self.http.post(&self.config.url).json(&body);
            if let Some(key) = &key {
                request = request.bearer_auth(key);
            }
            match request.send() {
                Ok(response) => {
                    let status = response.status();
                    if status.is_success() {
                        let latency_ms = started.elapsed().as_millis() as u64;
                        return self.decode(response, latency_ms);
                    }
                    if status.as_u16() == 429 {
                        last = GatewayError::RateLimited;
                    } else if status.is_server_error() {
                        last = GatewayError::Transport(format!("endpoint returned {status}"));
                    } else {
                        return Err(GatewayError::Transport(format!(
                            "endpoint returned {status}"
                        )));
                    }
                }
                Err(e) => last = GatewayError::Transport(e.to_string()),
            }
        }
        Err(last)
    }

    fn decode(
        &self,
        response: reqwest::blocking::Response,
        latency_ms: u64,
    ) -> Result<CompletionResponse, GatewayError> {
        let value: serde_json::Value = response
            .json()
            .map_err(|e| GatewayError::Transport(format!("unreadable response body: {e}")))?;
        let text = lookup_path(&value, &self.config.text_path)
            .and_then(serde_json::Value::as_str)
            .ok_or_else(|| GatewayError::BadResponse {
                path: self.config.text_path.clone(),
                body: value.to_string(),
            })?
            .to_string();
        let total_tokens =
            lookup_path(&value, &self.config.usage_path).and_then(serde_json::Value::as_u64);
        Ok(CompletionResponse {
            text,
            total_tokens,
            latency_ms,
        })
    }
}
