// Copyright 2026 The pseudokit Contributors
// SPDX-License-Identifier: Apache-2.0

//! Chat-completions transport: the endpoint trait and a blocking HTTP client
//! with bounded concurrency and retries.

use std::sync::{Condvar, Mutex};
use std::time::Duration;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::prompt::ChatMessage;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransportError {
    #[error("HTTP {status}: {body}")]
    Status { status: u16, body: String },
    #[error("transport failure: {0}")]
    Network(String),
    #[error("malformed response: {0}")]
    Malformed(String),
    #[error("giving up after {attempts} attempts: {last}")]
    Exhausted { attempts: u32, last: Box<TransportError> },
    #[error("mock has no rule matching the request and no default")]
    NoMockMatch,
}

impl TransportError {
    fn retryable(&self) -> bool {
        match self {
            TransportError::Status { status, .. } => *status == 429 || *status >= 500,
            TransportError::Network(_) => true,
            _ => false,
        }
    }
}

/// Anything that answers a chat request with the assistant's content.
pub trait ChatEndpoint: Send + Sync {
    fn complete(&self, request: &ChatRequest) -> Result<String, TransportError>;
}

/// Connection settings for an HTTP endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlmEndpoint {
    pub base_url: String,
    pub model: String,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub timeout: Duration,
    pub max_retries: u32,
    /// First backoff delay; doubles per retry, with ±25% jitter.
    pub backoff: Duration,
    pub max_in_flight: usize,
}

impl LlmEndpoint {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            base_url: base_url.into(),
            model: model.into(),
            api_key_env: "LLM_API_KEY".into(),
            timeout: Duration::from_secs(60),
            max_retries: 3,
            backoff: Duration::from_millis(500),
            max_in_flight: 4,
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.timeout.is_zero() {
            return Err("timeout must be positive".into());
        }
        if self.max_in_flight == 0 {
            return Err("max_in_flight must be at least 1".into());
        }
        Ok(())
    }

    fn url(&self) -> String {
        let base = self.base_url.trim_end_matches('/');
        if base.ends_with("/chat/completions") {
            base.to_string()
        } else {
            format!("{base}/chat/completions")
        }
    }
}

struct Semaphore {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Semaphore {
    fn acquire(&self) -> SemaphoreGuard<'_> {
        let mut free = self.free.lock().unwrap_or_else(|e| e.into_inner());
        while *free == 0 {
            free = self.cv.wait(free).unwrap_or_else(|e| e.into_inner());
        }
        *free -= 1;
        SemaphoreGuard(self)
    }
}

struct SemaphoreGuard<'a>(&'a Semaphore);

impl Drop for SemaphoreGuard<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap_or_else(|e| e.into_inner()) += 1;
        self.0.cv.notify_one();
    }
}

#[derive(Deserialize)]
struct CompletionResponse {
    choices: Vec<Choice>,
}

#[derive(Deserialize)]
struct Choice {
    message: ChoiceMessage,
}

#[derive(Deserialize)]
struct ChoiceMessage {
    content: Option<String>,
}

/// Blocking client for an OpenAI-style `/chat/completions` endpoint.
pub struct HttpEndpoint {
    config: LlmEndpoint,
    agent: ureq::Agent,
    slots: Semaphore,
}

impl std::fmt::Debug for HttpEndpoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpEndpoint").field("config", &self.config).finish()
    }
}

impl HttpEndpoint {
    pub fn new(config: LlmEndpoint) -> Self {
        let agent = ureq::AgentBuilder::new().timeout(config.timeout).build();
        let slots = Semaphore { free: Mutex::new(config.max_in_flight.max(1)), cv: Condvar::new() };
        Self { config, agent, slots }
    }

    pub fn config(&self) -> &LlmEndpoint {
        &self.config
    }

    fn send_once(&self, request: &ChatRequest) -> Result<String, TransportError> {
        let _slot = self.slots.acquire();
        let mut call = self.agent.post(&self.config.url()).set("Content-Type", "application/json");
        if let Ok(key) = std::env::var(&self.config.api_key_env) {
            call = call.set("Authorization", &format!("Bearer {key}"));
        }
        let response = match call.send_json(request) {
            Ok(response) => response,
            Err(ureq::Error::Status(status, response)) => {
                let body = response.into_string().unwrap_or_default();
                return Err(TransportError::Status { status, body });
            }
            Err(ureq::Error::Transport(t)) => return Err(TransportError::Network(t.to_string())),
        };
        let parsed: CompletionResponse =
            response.into_json().map_err(|e| TransportError::Malformed(e.to_string()))?;
        parsed
            .choices
            .into_iter()
            .next()
            .and_then(|c| c.message.content)
            .ok_or_else(|| TransportError::Malformed("no choices[0].message.content".into()))
    }
}

impl ChatEndpoint for HttpEndpoint {
    fn complete(&self, request: &ChatRequest) -> Result<String, TransportError> {
        let mut delay = self.config.backoff;
        let mut attempt = 0;
        loop {
            attempt += 1;
            match self.send_once(request) {
                Ok(content) => return Ok(content),
                Err(err) if !err.retryable() => return Err(err),
                Err(err) if attempt > self.config.max_retries => {
                    return Err(TransportError::Exhausted { attempts: attempt, last: Box::new(err) })
                }
                Err(_) => {
                    let jitter = rand::thread_rng().gen_range(0.75..=1.25);
                    std::thread::sleep(delay.mul_f64(jitter));
                    delay *= 2;
                }
            }
        }
    }
}
