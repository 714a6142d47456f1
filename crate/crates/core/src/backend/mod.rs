//! Text-completion backends.
//!
//! Everything that talks to a language model goes through [`Backend`]. The
//! live HTTP client is the only implementation that touches the network;
//! [`ScriptedBackend`] replays canned answers for offline runs and tests.

mod live;
mod meter;
mod scripted;
mod transcript;

use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use live::{LiveBackend, LiveConfig};
pub use meter::{MeteredBackend, TokenUsage};
pub use scripted::{ScriptRule, ScriptedBackend};
pub use transcript::TranscriptBackend;

/// Context window of the reference model, in tokens.
pub const DEFAULT_TOKEN_LIMIT: usize = 8192;

/// Fraction of the window held back to absorb estimation error.
pub const BUDGET_SAFETY_MARGIN: f64 = 0.10;

/// Rough token count: one token per four characters, rounded up.
pub fn estimate_tokens(text: &str) -> usize {
    text.chars().count().div_ceil(4)
}

/// Largest prompt estimate accepted for a window of `token_limit` tokens.
pub fn effective_budget(token_limit: usize) -> usize {
    (token_limit as f64 * (1.0 - BUDGET_SAFETY_MARGIN)).floor() as usize
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompletionRequest {
    pub system_prompt: String,
    pub user_prompt: String,
    pub max_output_tokens: u32,
    pub temperature: f64,
}

impl CompletionRequest {
    pub fn new(system_prompt: impl Into<String>, user_prompt: impl Into<String>) -> Self {
        Self {
            system_prompt: system_prompt.into(),
            user_prompt: user_prompt.into(),
            max_output_tokens: 1500,
            temperature: 0.0,
        }
    }

    pub fn with_max_output_tokens(mut self, n: u32) -> Self {
        self.max_output_tokens = n;
        self
    }

    /// Estimated prompt size (system plus user prompt).
    pub fn estimated_input_tokens(&self) -> usize {
        estimate_tokens(&self.system_prompt) + estimate_tokens(&self.user_prompt)
    }

    pub fn check(&self) -> Result<(), BackendError> {
        if self.system_prompt.trim().is_empty() || self.user_prompt.trim().is_empty() {
            return Err(BackendError::InvalidRequest("prompts must not be empty".into()));
        }
        if self.max_output_tokens == 0 {
            return Err(BackendError::InvalidRequest("max_output_tokens must be positive".into()));
        }
        if !(self.temperature.is_finite() && self.temperature >= 0.0) {
            return Err(BackendError::InvalidRequest("temperature must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletionResponse {
    pub text: String,
    pub input_tokens: u64,
    pub output_tokens: u64,
    pub latency_ms: u64,
}

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("request timed out after {0:?}")]
    Timeout(Duration),
    #[error("rate limited by provider (status {status})")]
    RateLimited { status: u16 },
    #[error("transport error: {0}")]
    Transport(String),
    #[error("provider refused the request: {0}")]
    Refusal(String),
    #[error("provider error (status {status}): {body}")]
    Provider { status: u16, body: String },
    #[error("no scripted response matches prompt starting with {0:?}")]
    UnmatchedPrompt(String),
    #[error("invalid request: {0}")]
    InvalidRequest(String),
    #[error("no backend configured: {0}")]
    Missing(String),
}

/// A text-completion service. Implementations must be callable from several threads at once.
pub trait Backend: Send + Sync {
    fn name(&self) -> &str;
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError>;
}

impl<B: Backend + ?Sized> Backend for &B {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        (**self).complete(request)
    }
}

impl<B: Backend + ?Sized> Backend for Box<B> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        (**self).complete(request)
    }
}

pub(crate) fn prompt_head(text: &str) -> String {
    text.chars().take(80).collect()
}
