//! Layered multi-agent study group: configuration, prompt assembly, chat
//! transport and the orchestrator that produces transcripts.

mod backend;
mod config;
mod graph;
mod http;
mod mock;
mod orchestrate;
mod prompt;
mod transcript;

use thiserror::Error;

pub use backend::{chat, BackendFailure, ChatBackend, ChatError, ChatReply, ChatRequest, Message, RetryPolicy};
pub use config::{
    BackendSettings, GoTermRef, OrganismConfig, Personas, RetrySettings, RoleModels, SamplingParams, VsgConfig,
};
pub use graph::{agent_id, build_study_group, task_id, AgentGraph, AgentSpec, Role, TaskSpec, PI_AGENT_ID, PI_TASK_ID};
pub use http::{extract_text, HttpBackend};
pub use mock::{MockBackend, MockScript, MockTask};
pub use orchestrate::{is_topological, orchestrate, RunParams};
pub use prompt::{render_prompt, upstream_header};
pub use transcript::{RunStatus, TaskOutput, TaskStatus, Transcript, ZERO_TIMESTAMP};

#[derive(Debug, Error)]
pub enum VsgError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("incomplete configuration: {0}")]
    IncompleteConfig(String),
    #[error("duplicate agent id {0}")]
    DuplicateAgent(String),
    #[error("duplicate task id {0}")]
    DuplicateTask(String),
    #[error("task {task} depends on unknown or unfinished task {input}")]
    MissingDependency { task: String, input: String },
    #[error("task dependencies contain a cycle through {0}")]
    CyclicTasks(String),
    #[error("run {} failed at task {failed_task}: {message}", transcript.run_id)]
    RunFailed {
        transcript: Box<Transcript>,
        failed_task: String,
        message: String,
    },
    #[error("could not persist transcript: {0}")]
    Persist(#[from] std::io::Error),
}
