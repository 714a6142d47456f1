use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{estimate_tokens, prompt_head, Backend, BackendError, CompletionRequest, CompletionResponse};

/// One scripted answer: returned when `matcher` occurs in the user prompt.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScriptRule {
    #[serde(rename = "match")]
    pub matcher: String,
    pub response: String,
}

impl ScriptRule {
    pub fn new(matcher: impl Into<String>, response: impl Into<String>) -> Self {
        Self {
            matcher: matcher.into(),
            response: response.into(),
        }
    }
}

/// Replays canned responses. The first rule whose matcher is a substring of
/// the user prompt wins; every request is logged.
#[derive(Debug)]
pub struct ScriptedBackend {
    rules: Vec<ScriptRule>,
    log: Mutex<Vec<CompletionRequest>>,
}

impl ScriptedBackend {
    pub fn new(rules: Vec<ScriptRule>) -> Result<Self, BackendError> {
        if rules.is_empty() {
            return Err(BackendError::InvalidRequest("script must contain at least one rule".into()));
        }
        Ok(Self {
            rules,
            log: Mutex::new(Vec::new()),
        })
    }

    /// Convenience constructor from `(matcher, response)` pairs.
    pub fn from_pairs<M: Into<String>, R: Into<String>>(
        pairs: impl IntoIterator<Item = (M, R)>,
    ) -> Result<Self, BackendError> {
        Self::new(pairs.into_iter().map(|(m, r)| ScriptRule::new(m, r)).collect())
    }

    /// Every request seen so far, in arrival order.
    pub fn requests(&self) -> Vec<CompletionRequest> {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn call_count(&self) -> usize {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).len()
    }
}

impl Backend for ScriptedBackend {
    fn name(&self) -> &str {
        "scripted"
    }

    fn complete(&self, request: &CompletionRequest) -> Result<CompletionResponse, BackendError> {
        request.check()?;
        self.log
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .push(request.clone());
        let rule = self
            .rules
            .iter()
            .find(|r| request.user_prompt.contains(&r.matcher))
            .ok_or_else(|| BackendError::UnmatchedPrompt(prompt_head(&request.user_prompt)))?;
        Ok(CompletionResponse {
            text: rule.response.clone(),
            input_tokens: request.estimated_input_tokens() as u64,
            output_tokens: estimate_tokens(&rule.response) as u64,
            latency_ms: 0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn req(user: &str) -> CompletionRequest {
        CompletionRequest::new("system", user)
    }

    #[test]
    fn returns_matching_canned_text() {
        let b = ScriptedBackend::from_pairs([("JD7", "Recommended: JD7 ...")]).unwrap();
        let r = b.complete(&req("consider JD7 please")).unwrap();
        assert_eq!(r.text, "Recommended: JD7 ...");
        assert_eq!(b.call_count(), 1);
    }

    #[test]
    fn first_matching_rule_wins() {
        let b = ScriptedBackend::from_pairs([("JD", "first"), ("JD7", "second")]).unwrap();
        assert_eq!(b.complete(&req("JD7")).unwrap().text, "first");
    }

    #[test]
    fn unmatched_prompt_is_an_error() {
        let b = ScriptedBackend::from_pairs([("JD7", "x")]).unwrap();
        let err = b.complete(&req("nothing relevant")).unwrap_err();
        assert!(matches!(err, BackendError::UnmatchedPrompt(ref head) if head.starts_with("nothing")));
        // the failed request is still logged
        assert_eq!(b.requests().len(), 1);
    }

    #[test]
    fn empty_script_is_rejected() {
        assert!(ScriptedBackend::new(vec![]).is_err());
    }

    #[test]
    fn identical_sequences_give_identical_responses() {
        let run = || {
            let b = ScriptedBackend::from_pairs([("a", "A"), ("b", "B"), ("", "fallback")]).unwrap();
            ["a", "zzz", "b", "ab"]
                .iter()
                .map(|p| b.complete(&req(p)).unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}
