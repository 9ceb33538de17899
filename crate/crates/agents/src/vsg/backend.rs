use std::thread;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: String,
    pub content: String,
}

impl Message {
    pub fn user(content: impl Into<String>) -> Self {
        Message {
            role: "user".into(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    /// Task on whose behalf the request is made. Not sent over the wire.
    #[serde(skip)]
    pub task_id: String,
    pub model: String,
    pub messages: Vec<Message>,
    pub temperature: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A single failed attempt as reported by a backend.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendFailure {
    #[error("backend unreachable: {0}")]
    Unavailable(String),
    #[error("request timed out")]
    Timeout,
    #[error("backend returned status {status}: {body}")]
    Status { status: u16, body: String },
    #[error("malformed response: {0}")]
    Malformed(String),
}

impl BackendFailure {
    pub fn is_retryable(&self) -> bool {
        match self {
            BackendFailure::Unavailable(_) | BackendFailure::Timeout => true,
            BackendFailure::Status { status, .. } => *status == 429 || *status >= 500,
            BackendFailure::Malformed(_) => false,
        }
    }
}

/// Chat-completion transport. Implementations must tolerate concurrent calls.
pub trait ChatBackend: Send + Sync {
    fn complete(&self, req: &ChatRequest, timeout: Duration) -> Result<String, BackendFailure>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Total attempts, including the first.
    pub max_attempts: u32,
    /// Doubled after every failed attempt.
    pub initial_backoff: Duration,
    pub timeout: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_attempts: 3,
            initial_backoff: Duration::from_secs(1),
            timeout: Duration::from_secs(120),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChatReply {
    pub text: String,
    pub latency_ms: u64,
    pub retries: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChatError {
    #[error("backend unavailable after {attempts} attempt(s): {message}")]
    BackendUnavailable { attempts: u32, message: String },
    #[error("backend error {status} after {attempts} attempt(s): {body}")]
    BackendError {
        attempts: u32,
        status: u16,
        body: String,
    },
    #[error("backend timed out after {attempts} attempt(s)")]
    BackendTimeout { attempts: u32 },
}

impl ChatError {
    pub fn attempts(&self) -> u32 {
        match self {
            ChatError::BackendUnavailable { attempts, .. }
            | ChatError::BackendError { attempts, .. }
            | ChatError::BackendTimeout { attempts } => *attempts,
        }
    }

    fn from_failure(failure: BackendFailure, attempts: u32) -> Self {
        match failure {
            BackendFailure::Unavailable(message) => ChatError::BackendUnavailable { attempts, message },
            BackendFailure::Timeout => ChatError::BackendTimeout { attempts },
            BackendFailure::Status { status, body } => ChatError::BackendError {
                attempts,
                status,
                body: excerpt(&body),
            },
            BackendFailure::Malformed(body) => ChatError::BackendError {
                attempts,
                status: 200,
                body: excerpt(&body),
            },
        }
    }
}

fn excerpt(body: &str) -> String {
    const LIMIT: usize = 200;
    match body.char_indices().nth(LIMIT) {
        Some((cut, _)) => format!("{}…", &body[..cut]),
        None => body.to_string(),
    }
}

/// Sends `req`, retrying retryable failures with exponential backoff.
pub fn chat(
    backend: &dyn ChatBackend,
    req: &ChatRequest,
    policy: &RetryPolicy,
) -> Result<ChatReply, ChatError> {
    let mut backoff = policy.initial_backoff;
    let mut attempt = 0;
    loop {
        attempt += 1;
        let started = Instant::now();
        match backend.complete(req, policy.timeout) {
            Ok(text) => {
                return Ok(ChatReply {
                    text,
                    latency_ms: started.elapsed().as_millis() as u64,
                    retries: attempt - 1,
                })
            }
            Err(failure) if failure.is_retryable() && attempt < policy.max_attempts => {
                if !backoff.is_zero() {
                    thread::sleep(backoff);
                }
                backoff *= 2;
            }
            Err(failure) => return Err(ChatError::from_failure(failure, attempt)),
        }
    }
}
