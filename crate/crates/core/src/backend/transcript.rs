use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::{Backend, BackendError, CompletionRequest, CompletionResponse};

/// Writes every prompt and its answer to `<dir>/call-NNNN.txt`, numbering
/// on from any transcripts already in the directory.
pub struct TranscriptBackend<B> {
    inner: B,
    dir: PathBuf,
    counter: AtomicUsize,
}

impl<B: Backend> TranscriptBackend<B> {
    pub fn new(inner: B, dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        let last = std::fs::read_dir(&dir)?
            .filter_map(|e| e.ok())
            .filter_map(|e| {
                let name = e.file_name().into_string().ok()?;
                name.strip_prefix("call-")?.strip_suffix(".txt")?.parse::<usize>().ok()
            })
            .max()
            .unwrap_or(0);
        Ok(Self {
            inner,
            dir,
            counter: AtomicUsize::new(last),
        })
    }
}

impl<B: Backend> Backend for TranscriptBackend<B> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        let n = self.counter.fetch_add(1, Ordering::SeqCst) + 1;
        let result = self.inner.complete(request);
        let answer = match &result {
            Ok(r) => format!(
                "{}\n\n--- tokens: in={} out={} latency_ms={}",
                r.text, r.input_tokens, r.output_tokens, r.latency_ms
            ),
            Err(e) => format!("ERROR: {e}"),
        };
        let body = format!(
            "=== SYSTEM ===\n{}\n\n=== USER ===\n{}\n\n=== RESPONSE ===\n{}\n",
            request.system_prompt, request.user_prompt, answer
        );
        let path = self.dir.join(format!("call-{n:04}.txt"));
        if let Err(e) = std::fs::write(&path, body) {
            log::warn!("could not write transcript {}: {e}", path.display());
        }
        result
    }
}
