//! Blocking HTTP client for OpenAI-compatible chat completions.

use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::transcript::{Role, SessionTranscript};
use crate::{GatewayError, LlmConfig};

/// Total requests allowed against HTTP 429 (1 initial + 2 retries).
const MAX_RATE_LIMIT_ATTEMPTS: u32 = 3;

/// One message of the conversation being sent to the service.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    /// Speaker.
    pub role: Role,
    /// Message text.
    pub content: String,
}

impl ChatMessage {
    /// A user-authored message.
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }

    /// An assistant-authored message (prior replies in the history).
    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

/// A successful completion: the assistant text plus how many HTTP
/// requests it took (more than one only after 429 backoffs).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompletionResponse {
    /// Assistant message content.
    pub content: String,
    /// HTTP requests sent, counting rate-limited ones.
    pub attempts: u32,
}

/// Sends `messages` to the configured endpoint and returns the
/// assistant reply.
///
/// The last entry of `messages` must be the new outgoing message; it
/// and the reply are appended to `transcript` (earlier entries are
/// history that is already recorded). The API key is read from the
/// configured environment variable before any network traffic; HTTP
/// 429 is retried with exponential backoff up to 3 total attempts.
pub fn request_completion(
    config: &LlmConfig,
    messages: &[ChatMessage],
    transcript: &mut SessionTranscript,
) -> Result<CompletionResponse, GatewayError> {
    config.validate()?;
    if messages.is_empty() {
        return Err(GatewayError::InvalidConfig {
            reason: "messages must be non-empty".to_string(),
        });
    }
    let api_key = std::env::var(&config.api_key_env)
        .ok()
        .filter(|k| !k.is_empty())
        .ok_or_else(|| GatewayError::AuthMissing {
            env_var: config.api_key_env.clone(),
        })?;

    let outgoing = messages.last().expect("checked non-empty");
    transcript.push(outgoing.role, outgoing.content.clone());

    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(config.timeout_secs))
        .build()
        .map_err(|e| GatewayError::Transport(e.to_string()))?;
    let body = json!({
        "model": config.model,
        "temperature": config.temperature,
        "messages": messages
            .iter()
            .map(|m| json!({ "role": m.role.wire_name(), "content": m.content }))
            .collect::<Vec<_>>(),
    });

    let mut attempts = 0u32;
    loop {
        attempts += 1;
        let response = client
            .post(&config.endpoint)
            .bearer_auth(&api_key)
            .json(&body)
            .send();
        let response = match response {
            Ok(r) => r,
            Err(e) if e.is_timeout() => {
                return Err(GatewayError::Timeout {
                    seconds: config.timeout_secs,
                })
            }
            Err(e) => return Err(GatewayError::Transport(e.to_string())),
        };

        let status = response.status();
        if status.as_u16() == 429 {
            if attempts >= MAX_RATE_LIMIT_ATTEMPTS {
                return Err(GatewayError::RateLimited { attempts });
            }
            let backoff = config.retry_base_ms.saturating_mul(1 << (attempts - 1));
            thread::sleep(Duration::from_millis(backoff));
            continue;
        }
        let text = response
            .text()
            .map_err(|e| GatewayError::Transport(e.to_string()))?;
        if !status.is_success() {
            let snippet: String = text.chars().take(200).collect();
            return Err(GatewayError::Http {
                status: status.as_u16(),
                body_snippet: snippet,
            });
        }

        let content = parse_completion_content(&text)?;
        transcript.push(Role::Assistant, content.clone());
        return Ok(CompletionResponse { content, attempts });
    }
}

/// Pulls `choices[0].message.content` out of a completion body.
fn parse_completion_content(body: &str) -> Result<String, GatewayError> {
    let value: serde_json::Value =
        serde_json::from_str(body).map_err(|e| GatewayError::MalformedResponse {
            reason: format!("body is not JSON: {e}"),
        })?;
    value
        .get("choices")
        .and_then(|c| c.get(0))
        .and_then(|c| c.get("message"))
        .and_then(|m| m.get("content"))
        .and_then(|c| c.as_str())
        .map(str::to_string)
        .ok_or_else(|| GatewayError::MalformedResponse {
            reason: "missing choices[0].message.content".to_string(),
        })
}
