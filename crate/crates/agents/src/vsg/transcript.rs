use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::graph::Role;

pub const ZERO_TIMESTAMP: &str = "1970-01-01T00:00:00.000Z";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskStatus {
    Completed,
    Failed,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskOutput {
    pub task_id: String,
    pub agent_id: String,
    pub agent_name: String,
    pub role: Role,
    pub organism: Option<String>,
    pub layer: u8,
    pub model: String,
    pub instruction: String,
    pub prompt: String,
    pub response: String,
    pub latency_ms: u64,
    pub retries: u32,
    pub status: TaskStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Ordered record of one study-group run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript {
    pub run_id: String,
    pub status: RunStatus,
    pub started_at: String,
    pub finished_at: String,
    pub config_digest: String,
    pub outputs: Vec<TaskOutput>,
}

impl Transcript {
    /// Copy with timestamps and latencies zeroed, for golden comparison.
    pub fn canonical(&self) -> Transcript {
        let mut t = self.clone();
        t.started_at = ZERO_TIMESTAMP.into();
        t.finished_at = ZERO_TIMESTAMP.into();
        for o in &mut t.outputs {
            o.latency_ms = 0;
        }
        t
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("transcript serialises");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn output(&self, task_id: &str) -> Option<&TaskOutput> {
        self.outputs.iter().find(|o| o.task_id == task_id)
    }

    pub fn run_dir(&self, root: &Path) -> PathBuf {
        root.join(&self.run_id)
    }

    /// Writes `transcript.json` and `transcript.canonical.json` under
    /// `<root>/<run_id>/` and returns that directory.
    pub fn persist(&self, root: &Path) -> io::Result<PathBuf> {
        let dir = self.run_dir(root);
        fs::create_dir_all(&dir)?;
        fs::write(dir.join("transcript.json"), self.to_json())?;
        fs::write(dir.join("transcript.canonical.json"), self.canonical().to_json())?;
        Ok(dir)
    }
}
