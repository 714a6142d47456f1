use std::sync::atomic::{AtomicU64, Ordering};

use serde::Serialize;

use super::{Backend, BackendError, CompletionRequest, CompletionResponse};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TokenUsage {
    pub calls: u64,
    pub input_tokens: u64,
    pub output_tokens: u64,
}

impl TokenUsage {
    pub fn total(&self) -> u64 {
        self.input_tokens + self.output_tokens
    }

    pub fn since(&self, earlier: &TokenUsage) -> TokenUsage {
        TokenUsage {
            calls: self.calls - earlier.calls,
            input_tokens: self.input_tokens - earlier.input_tokens,
            output_tokens: self.output_tokens - earlier.output_tokens,
        }
    }
}

/// Wraps a backend and accumulates token counts of successful calls.
pub struct MeteredBackend<B> {
    inner: B,
    calls: AtomicU64,
    input_tokens: AtomicU64,
    output_tokens: AtomicU64,
}

impl<B: Backend> MeteredBackend<B> {
    pub fn new(inner: B) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
            input_tokens: AtomicU64::new(0),
            output_tokens: AtomicU64::new(0),
        }
    }

    pub fn usage(&self) -> TokenUsage {
        TokenUsage {
            calls: self.calls.load(Ordering::SeqCst),
            input_tokens: self.input_tokens.load(Ordering::SeqCst),
            output_tokens: self.output_tokens.load(Ordering::SeqCst),
        }
    }
}

impl<B: Backend> Backend for MeteredBackend<B> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let resp = self.inner.complete(request)?;
        self.calls.fetch_add(1, Ordering::SeqCst);
        self.input_tokens.fetch_add(resp.input_tokens, Ordering::SeqCst);
        self.output_tokens.fetch_add(resp.output_tokens, Ordering::SeqCst);
        Ok(resp)
    }
}
