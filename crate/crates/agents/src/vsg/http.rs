use std::time::Duration;

use serde_json::Value;

use super::backend::{BackendFailure, ChatBackend, ChatRequest};

/// Chat-completion client for OpenAI-compatible local model servers.
#[derive(Debug, Clone)]
pub struct HttpBackend {
    client: reqwest::blocking::Client,
    url: String,
    response_path: Vec<String>,
}

impl HttpBackend {
    /// `response_path` is dotted, numeric segments index arrays
    /// (e.g. `choices.0.message.content`, or `message.content` for Ollama's
    /// native endpoint).
    pub fn new(url: impl Into<String>, response_path: &str) -> Result<Self, BackendFailure> {
        let client = reqwest::blocking::Client::builder()
            .build()
            .map_err(|e| BackendFailure::Unavailable(e.to_string()))?;
        Ok(HttpBackend {
            client,
            url: url.into(),
            response_path: response_path.split('.').map(str::to_string).collect(),
        })
    }

    pub fn url(&self) -> &str {
        &self.url
    }
}

/// Follows a dotted path through a JSON document to a string leaf.
pub fn extract_text<'a>(body: &'a Value, path: &[String]) -> Option<&'a str> {
    path.iter()
        .try_fold(body, |v, seg| match seg.parse::<usize>() {
            Ok(i) if v.is_array() => v.get(i),
            _ => v.get(seg.as_str()),
        })?
        .as_str()
}

impl ChatBackend for HttpBackend {
    fn complete(&self, req: &ChatRequest, timeout: Duration) -> Result<String, BackendFailure> {
        let mut payload = serde_json::to_value(req).map_err(|e| BackendFailure::Malformed(e.to_string()))?;
        payload["stream"] = Value::Bool(false);
        let response = self
            .client
            .post(&self.url)
            .timeout(timeout)
            .json(&payload)
            .send()
            .map_err(|e| {
                if e.is_timeout() {
                    BackendFailure::Timeout
                } else {
                    BackendFailure::Unavailable(e.to_string())
                }
            })?;
        let status = response.status();
        let body = response.text().map_err(|e| {
            if e.is_timeout() {
                BackendFailure::Timeout
            } else {
                BackendFailure::Unavailable(e.to_string())
            }
        })?;
        if !status.is_success() {
            return Err(BackendFailure::Status {
                status: status.as_u16(),
                body,
            });
        }
        let json: Value = serde_json::from_str(&body).map_err(|_| BackendFailure::Malformed(body.clone()))?;
        extract_text(&json, &self.response_path)
            .map(str::to_string)
            .ok_or(BackendFailure::Malformed(body))
    }
}
