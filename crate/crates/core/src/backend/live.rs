use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{estimate_tokens, Backend, BackendError, CompletionRequest, CompletionResponse};

#[derive(Debug, Clone)]
pub struct LiveConfig {
    /// Full chat-completion URL, e.g. `https://api.openai.com/v1/chat/completions`.
    pub endpoint_url: String,
    pub api_key: String,
    pub model_name: String,
    pub timeout: Duration,
    pub max_retries: u32,
    /// Delay before the first retry; doubles on every further attempt.
    pub initial_backoff: Duration,
}

impl LiveConfig {
    pub fn new(endpoint_url: impl Into<String>, api_key: impl Into<String>, model_name: impl Into<String>) -> Self {
        Self {
            endpoint_url: endpoint_url.into(),
            api_key: api_key.into(),
            model_name: model_name.into(),
            timeout: Duration::from_secs(120),
            max_retries: 3,
            initial_backoff: Duration::from_secs(1),
        }
    }
}

/// Chat-completion client over HTTP(S).
pub struct LiveBackend {
    config: LiveConfig,
    client: reqwest::blocking::Client,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    #[serde(default)]
    choices: Vec<Choice>,
    #[serde(default)]
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: ResponseMessage,
    #[serde(default)]
    finish_reason: Option<String>,
}

#[derive(Deserialize)]
struct ResponseMessage {
    #[serde(default)]
    content: Option<String>,
    #[serde(default)]
    refusal: Option<String>,
}

#[derive(Deserialize)]
struct Usage {
    #[serde(default)]
    prompt_tokens: Option<u64>,
    #[serde(default)]
    completion_tokens: Option<u64>,
}

enum Attempt {
    Done(CompletionResponse),
    Retry(BackendError),
    Fail(BackendError),
}

impl LiveBackend {
    pub fn new(config: LiveConfig) -> Result<Self, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(config.timeout)
            .build()
            .map_err(|e| BackendError::Transport(e.to_string()))?;
        Ok(Self { config, client })
    }

    fn attempt(&self, request: &CompletionRequest) -> Attempt {
        let body = json!({
            "model": self.config.model_name,
            "messages": [
                ChatMessage { role: "system", content: &request.system_prompt },
                ChatMessage { role: "user", content: &request.user_prompt },
            ],
            "max_tokens": request.max_output_tokens,
            "temperature": request.temperature,
        });
        let started = Instant::now();
        let resp = match self
            .client
            .post(&self.config.endpoint_url)
            .bearer_auth(&self.config.api_key)
            .json(&body)
            .send()
        {
            Ok(r) => r,
            Err(e) if e.is_timeout() => return Attempt::Retry(BackendError::Timeout(self.config.timeout)),
            Err(e) => return Attempt::Retry(BackendError::Transport(e.to_string())),
        };
        let status = resp.status().as_u16();
        let text = match resp.text() {
            Ok(t) => t,
            Err(e) => return Attempt::Retry(BackendError::Transport(e.to_string())),
        };
        let latency_ms = started.elapsed().as_millis() as u64;

        match status {
            200..=299 => {}
            429 => return Attempt::Retry(BackendError::RateLimited { status }),
            408 | 500 | 502 | 503 | 504 => {
                return Attempt::Retry(BackendError::Provider {
                    status,
                    body: excerpt(&text),
                })
            }
            _ => {
                return Attempt::Fail(BackendError::Provider {
                    status,
                    body: excerpt(&text),
                })
            }
        }

        let parsed: ChatResponse = match serde_json::from_str(&text) {
            Ok(p) => p,
            Err(e) => {
                return Attempt::Fail(BackendError::Provider {
                    status,
                    body: format!("malformed response body ({e}): {}", excerpt(&text)),
                })
            }
        };
        let Some(choice) = parsed.choices.into_iter().next() else {
            return Attempt::Fail(BackendError::Provider {
                status,
                body: format!("no choices in response: {}", excerpt(&text)),
            });
        };
        if let Some(refusal) = choice.message.refusal.filter(|r| !r.is_empty()) {
            return Attempt::Fail(BackendError::Refusal(refusal));
        }
        if choice.finish_reason.as_deref() == Some("content_filter") {
            return Attempt::Fail(BackendError::Refusal("content filter triggered".into()));
        }
        let content = choice.message.content.unwrap_or_default();
        let usage = parsed.usage;
        let input_tokens = usage
            .as_ref()
            .and_then(|u| u.prompt_tokens)
            .unwrap_or(request.estimated_input_tokens() as u64);
        let output_tokens = usage
            .as_ref()
            .and_then(|u| u.completion_tokens)
            .unwrap_or(estimate_tokens(&content) as u64);
        Attempt::Done(CompletionResponse {
            text: content,
            input_tokens,
            output_tokens,
            latency_ms,
        })
    }
}

fn excerpt(body: &str) -> String {
    const MAX: usize = 300;
    let mut s: String = body.chars().take(MAX).collect();
    if body.chars().count() > MAX {
        s.push('…');
    }
    s
}

impl Backend for LiveBackend {
    fn name(&self) -> &str {
        &self.config.model_name
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        request.check()?;
        let mut delay = self.config.initial_backoff;
        let mut attempt = 0;
        loop {
            match self.attempt(request) {
                Attempt::Done(r) => return Ok(r),
                Attempt::Fail(e) => return Err(e),
                Attempt::Retry(e) if attempt >= self.config.max_retries => return Err(e),
                Attempt::Retry(e) => {
                    attempt += 1;
                    log::debug!("retrying after {e} (attempt {attempt}, sleeping {delay:?})");
                    std::thread::sleep(delay);
                    delay *= 2;
                }
            }
        }
    }
}
