use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;
use std::thread;

use chrono::{SecondsFormat, Utc};

use super::backend::{chat, ChatBackend, ChatRequest, Message, RetryPolicy};
use super::config::SamplingParams;
use super::graph::{AgentGraph, TaskSpec};
use super::prompt::render_prompt;
use super::transcript::{RunStatus, TaskOutput, TaskStatus, Transcript};
use super::VsgError;

#[derive(Debug, Clone)]
pub struct RunParams {
    pub run_id: String,
    pub config_digest: String,
    pub sampling: SamplingParams,
    pub retry: RetryPolicy,
    /// Root under which `<run_id>/transcript.json` is written, if any.
    pub persist_dir: Option<PathBuf>,
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn blank_output(graph: &AgentGraph, task: &TaskSpec, status: TaskStatus) -> TaskOutput {
    let agent = graph.task_agent(task);
    TaskOutput {
        task_id: task.id.clone(),
        agent_id: agent.id.clone(),
        agent_name: agent.name.clone(),
        role: agent.role,
        organism: agent.organism.clone(),
        layer: task.layer,
        model: agent.model.clone(),
        instruction: task.instruction.clone(),
        prompt: String::new(),
        response: String::new(),
        latency_ms: 0,
        retries: 0,
        status,
        error: None,
    }
}

fn skipped(graph: &AgentGraph, task: &TaskSpec, reason: &str) -> TaskOutput {
    let mut out = blank_output(graph, task, TaskStatus::Skipped);
    out.error = Some(reason.to_string());
    out
}

/// Runs one organism's tasks for a layer in order. Later tasks in the group
/// see earlier outputs; a failure skips the rest of the group.
fn run_group(
    graph: &AgentGraph,
    backend: &dyn ChatBackend,
    params: &RunParams,
    upstream: &BTreeMap<String, String>,
    tasks: &[&TaskSpec],
) -> Vec<TaskOutput> {
    let mut local = upstream.clone();
    let mut outputs = Vec::with_capacity(tasks.len());
    let mut failed: Option<String> = None;
    for task in tasks {
        if let Some(f) = &failed {
            outputs.push(skipped(graph, task, &format!("upstream task {f} did not complete")));
            continue;
        }
        let agent = graph.task_agent(task);
        let mut out = blank_output(graph, task, TaskStatus::Completed);
        let prompt = match render_prompt(task, &local, graph) {
            Ok(p) => p,
            Err(e) => {
                out.status = TaskStatus::Failed;
                out.error = Some(e.to_string());
                failed = Some(task.id.clone());
                outputs.push(out);
                continue;
            }
        };
        let req = ChatRequest {
            task_id: task.id.clone(),
            model: agent.model.clone(),
            messages: vec![Message::user(prompt.clone())],
            temperature: params.sampling.temperature,
            seed: params.sampling.seed,
        };
        out.prompt = prompt;
        match chat(backend, &req, &params.retry) {
            Ok(reply) => {
                out.response = reply.text.clone();
                out.latency_ms = reply.latency_ms;
                out.retries = reply.retries;
                local.insert(task.id.clone(), reply.text);
            }
            Err(e) => {
                out.status = TaskStatus::Failed;
                out.retries = e.attempts().saturating_sub(1);
                out.error = Some(e.to_string());
                failed = Some(task.id.clone());
            }
        }
        outputs.push(out);
    }
    outputs
}

/// True when every task appears after all of its inputs.
pub fn is_topological(graph: &AgentGraph, outputs: &[TaskOutput]) -> bool {
    let mut seen = HashSet::new();
    outputs.iter().all(|o| {
        let ok = graph
            .task(&o.task_id)
            .is_some_and(|t| t.inputs.iter().all(|i| seen.contains(i.as_str())));
        seen.insert(o.task_id.as_str());
        ok
    })
}

/// Executes the study group layer by layer. Within a layer each organism's
/// tasks run on their own thread; the next layer starts only once the
/// current one has finished. After any failure the remaining layers are
/// skipped and `RunFailed` carries the partial transcript.
pub fn orchestrate(
    graph: &AgentGraph,
    backend: &dyn ChatBackend,
    params: &RunParams,
) -> Result<Transcript, VsgError> {
    graph.validate()?;
    let started_at = now();
    let mut responses: BTreeMap<String, String> = BTreeMap::new();
    let mut results: BTreeMap<String, TaskOutput> = BTreeMap::new();
    let mut failure: Option<(String, String)> = None;

    let mut layers: Vec<u8> = graph.tasks.iter().map(|t| t.layer).collect();
    layers.sort_unstable();
    layers.dedup();

    for layer in layers {
        let tasks: Vec<&TaskSpec> = graph.tasks.iter().filter(|t| t.layer == layer).collect();
        if let Some((failed, _)) = &failure {
            for t in tasks {
                results.insert(t.id.clone(), skipped(graph, t, &format!("run stopped after {failed} failed")));
            }
            continue;
        }
        let mut groups: Vec<(Option<&str>, Vec<&TaskSpec>)> = Vec::new();
        for t in tasks {
            let org = graph.task_agent(t).organism.as_deref();
            match groups.iter_mut().find(|(o, _)| *o == org) {
                Some((_, g)) => g.push(t),
                None => groups.push((org, vec![t])),
            }
        }
        let upstream = &responses;
        let finished: Vec<Vec<TaskOutput>> = thread::scope(|s| {
            let handles: Vec<_> = groups
                .iter()
                .map(|(_, g)| s.spawn(move || run_group(graph, backend, params, upstream, g)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("task thread panicked"))
                .collect()
        });
        for out in finished.into_iter().flatten() {
            match out.status {
                TaskStatus::Completed => {
                    responses.insert(out.task_id.clone(), out.response.clone());
                }
                TaskStatus::Failed if failure.is_none() => {
                    failure = Some((out.task_id.clone(), out.error.clone().unwrap_or_default()));
                }
                _ => {}
            }
            results.insert(out.task_id.clone(), out);
        }
    }

    let outputs: Vec<TaskOutput> = graph
        .tasks
        .iter()
        .filter_map(|t| results.remove(&t.id))
        .collect();
    assert!(is_topological(graph, &outputs), "transcript order violates task dependencies");
    let transcript = Transcript {
        run_id: params.run_id.clone(),
        status: if failure.is_some() { RunStatus::Failed } else { RunStatus::Completed },
        started_at,
        finished_at: now(),
        config_digest: params.config_digest.clone(),
        outputs,
    };
    if let Some(dir) = &params.persist_dir {
        transcript.persist(dir)?;
    }
    match failure {
        None => Ok(transcript),
        Some((failed_task, message)) => Err(VsgError::RunFailed {
            transcript: Box::new(transcript),
            failed_task,
            message,
        }),
    }
}
