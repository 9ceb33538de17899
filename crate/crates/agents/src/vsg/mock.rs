use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::backend::{BackendFailure, ChatBackend, ChatRequest};
use super::VsgError;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockTask {
    /// Returned by successive successful calls; the last one repeats.
    pub responses: Vec<String>,
    #[serde(default)]
    pub failures_before_success: u32,
}

/// Task id → scripted behaviour.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MockScript(pub BTreeMap<String, MockTask>);

impl MockScript {
    pub fn from_json_str(text: &str) -> Result<Self, VsgError> {
        serde_json::from_str(text).map_err(|e| VsgError::Config(format!("mock script: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, VsgError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VsgError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn insert(&mut self, task: impl Into<String>, responses: &[&str], failures: u32) {
        self.0.insert(
            task.into(),
            MockTask {
                responses: responses.iter().map(|s| s.to_string()).collect(),
                failures_before_success: failures,
            },
        );
    }
}

#[derive(Debug, Default)]
struct Progress {
    attempts: u32,
    successes: usize,
}

/// Scripted backend keyed by task id. Never touches the network.
#[derive(Debug)]
pub struct MockBackend {
    script: MockScript,
    progress: Mutex<HashMap<String, Progress>>,
    log: Mutex<Vec<ChatRequest>>,
}

impl MockBackend {
    pub fn new(script: MockScript) -> Self {
        MockBackend {
            script,
            progress: Mutex::new(HashMap::new()),
            log: Mutex::new(Vec::new()),
        }
    }

    /// Every request received, in arrival order.
    pub fn requests(&self) -> Vec<ChatRequest> {
        self.log.lock().unwrap().clone()
    }

    pub fn attempts(&self, task: &str) -> u32 {
        self.progress
            .lock()
            .unwrap()
            .get(task)
            .map_or(0, |p| p.attempts)
    }
}

impl ChatBackend for MockBackend {
    fn complete(&self, req: &ChatRequest, _timeout: Duration) -> Result<String, BackendFailure> {
        self.log.lock().unwrap().push(req.clone());
        let Some(task) = self.script.0.get(&req.task_id) else {
            return Err(BackendFailure::Status {
                status: 404,
                body: format!("no scripted response for task {}", req.task_id),
            });
        };
        let mut progress = self.progress.lock().unwrap();
        let p = progress.entry(req.task_id.clone()).or_default();
        p.attempts += 1;
        if p.attempts <= task.failures_before_success {
            return Err(BackendFailure::Unavailable(format!(
                "scripted failure {} of {}",
                p.attempts, task.failures_before_success
            )));
        }
        let Some(last) = task.responses.len().checked_sub(1) else {
            return Err(BackendFailure::Status {
                status: 404,
                body: format!("task {} has no scripted responses", req.task_id),
            });
        };
        let text = task.responses[p.successes.min(last)].clone();
        p.successes += 1;
        Ok(text)
    }
}
