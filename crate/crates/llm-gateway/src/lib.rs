//! Chat-completion gateway for LLM-guided hierarchy restructuring.
//!
//! Drives the loop: send the assembled restructuring prompt, extract a
//! candidate hierarchy from the reply, validate it against the four
//! acceptance criteria, issue follow-up repair prompts for any failed
//! criterion, and — when a conversation's follow-up budget is spent —
//! restart the whole conversation from the top. Every byte sent and
//! received lands in a [`SessionTranscript`].
//!
//! The wire protocol is an OpenAI-compatible chat-completion JSON
//! schema (messages array, model, temperature), so any compatible
//! server works; the endpoint is configurable. All tests run against
//! the scripted in-process server in [`mock`] — no network.

#![forbid(unsafe_code)]

pub mod mock;

mod client;
mod extract;
mod session;
mod transcript;

pub use client::{request_completion, ChatMessage, CompletionResponse};
pub use extract::extract_hierarchy;
pub use session::restructure_session;
pub use transcript::{ExtractedBlock, Role, SessionTranscript, Turn};

use restructure::RestructureError;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Environment variable holding the API key by default.
pub const DEFAULT_API_KEY_ENV: &str = "LLM_API_KEY";
/// Environment variable naming the service base URL.
pub const BASE_URL_ENV: &str = "LLM_BASE_URL";
/// Environment variable naming the model.
pub const MODEL_ENV: &str = "LLM_MODEL";

/// Connection and loop-budget settings for a restructuring session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LlmConfig {
    /// Full URL of the chat-completions endpoint.
    pub endpoint: String,
    /// Model identifier sent with every request.
    pub model: String,
    /// Name of the environment variable holding the API key. The key
    /// itself is never stored in the config.
    pub api_key_env: String,
    /// Per-request timeout in seconds; must be positive.
    pub timeout_secs: u64,
    /// Follow-up repair prompts allowed per conversation.
    pub max_follow_ups: u32,
    /// Fresh-conversation restarts allowed per session.
    pub max_restarts: u32,
    /// Sampling temperature; 0 keeps sessions reproducible.
    pub temperature: f64,
    /// Base delay for the 429 retry backoff, in milliseconds.
    pub retry_base_ms: u64,
}

impl LlmConfig {
    /// Config for `endpoint`/`model` with the default budgets:
    /// 3 follow-ups, 2 restarts, 30 s timeout, temperature 0.
    pub fn new(endpoint: impl Into<String>, model: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            model: model.into(),
            api_key_env: DEFAULT_API_KEY_ENV.to_string(),
            timeout_secs: 30,
            max_follow_ups: 3,
            max_restarts: 2,
            temperature: 0.0,
            retry_base_ms: 100,
        }
    }

    /// Builds a config from `LLM_BASE_URL` and `LLM_MODEL`; the key
    /// stays in `LLM_API_KEY` until request time. `LLM_BASE_URL` may
    /// point at the service root (`.../v1`) or directly at the
    /// chat-completions route.
    pub fn from_env() -> Result<Self, GatewayError> {
        let base = std::env::var(BASE_URL_ENV).map_err(|_| GatewayError::InvalidConfig {
            reason: format!("{BASE_URL_ENV} is not set"),
        })?;
        let model = std::env::var(MODEL_ENV).map_err(|_| GatewayError::InvalidConfig {
            reason: format!("{MODEL_ENV} is not set"),
        })?;
        let trimmed = base.trim_end_matches('/');
        let endpoint = if trimmed.ends_with("/chat/completions") {
            trimmed.to_string()
        } else {
            format!("{trimmed}/chat/completions")
        };
        Ok(Self::new(endpoint, model))
    }

    /// Checks the invariants that cannot be encoded in the types.
    pub fn validate(&self) -> Result<(), GatewayError> {
        if self.timeout_secs == 0 {
            return Err(GatewayError::InvalidConfig {
                reason: "timeout must be positive".to_string(),
            });
        }
        if self.endpoint.is_empty() {
            return Err(GatewayError::InvalidConfig {
                reason: "endpoint is empty".to_string(),
            });
        }
        if !self.temperature.is_finite() || self.temperature < 0.0 {
            return Err(GatewayError::InvalidConfig {
                reason: "temperature must be finite and non-negative".to_string(),
            });
        }
        Ok(())
    }
}

/// Gateway failures: configuration, transport, protocol, and loop
/// exhaustion.
#[derive(Debug, Error)]
pub enum GatewayError {
    /// The configured API-key environment variable is unset or empty.
    /// Raised before any network traffic.
    #[error("API key not found: environment variable {env_var} is unset or empty")]
    AuthMissing {
        /// Variable that was consulted.
        env_var: String,
    },
    /// The request exceeded the configured timeout.
    #[error("request timed out after {seconds}s")]
    Timeout {
        /// Configured timeout that was exceeded.
        seconds: u64,
    },
    /// The service kept answering HTTP 429 through every backoff.
    #[error("rate limited after {attempts} attempts")]
    RateLimited {
        /// Requests sent before giving up.
        attempts: u32,
    },
    /// A 2xx reply that does not carry `choices[0].message.content`.
    #[error("malformed completion response: {reason}")]
    MalformedResponse {
        /// What was wrong with the body.
        reason: String,
    },
    /// A non-429 error status from the service.
    #[error("HTTP {status} from completion endpoint: {body_snippet}")]
    Http {
        /// Status code received.
        status: u16,
        /// Leading bytes of the response body.
        body_snippet: String,
    },
    /// Connection-level failure (DNS, refused, broken pipe, ...).
    #[error("transport failure: {0}")]
    Transport(String),
    /// The config violates an invariant.
    #[error("invalid gateway configuration: {reason}")]
    InvalidConfig {
        /// Which invariant failed.
        reason: String,
    },
    /// Every follow-up and restart was spent without producing a
    /// candidate that passes all four criteria.
    #[error(
        "restructuring attempts exhausted after {} assistant turns ({} follow-ups, {} restarts)",
        .transcript.assistant_turn_count(),
        .attempts.follow_ups,
        .attempts.restarts
    )]
    ExhaustedAttempts {
        /// Complete session record, including every failed conversation.
        transcript: Box<SessionTranscript>,
        /// Validation report of the last candidate examined.
        validation: Box<restructure::ValidationReport>,
        /// Budgets consumed.
        attempts: restructure::AttemptCounts,
    },
    /// Prompt assembly failed (empty recommendation set).
    #[error(transparent)]
    Prompt(#[from] RestructureError),
}
