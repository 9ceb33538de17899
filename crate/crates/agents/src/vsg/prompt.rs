use std::collections::BTreeMap;

use super::graph::{AgentGraph, TaskSpec};
use super::VsgError;

/// Header placed above each upstream output inside a prompt.
pub fn upstream_header(agent_name: &str, task_id: &str) -> String {
    format!("### Output of {agent_name} [{task_id}]")
}

/// Persona, instruction, then every upstream output under its header, joined
/// by blank lines. `upstream` maps task id to that task's response text.
pub fn render_prompt(
    task: &TaskSpec,
    upstream: &BTreeMap<String, String>,
    graph: &AgentGraph,
) -> Result<String, VsgError> {
    let agent = graph.task_agent(task);
    let mut prompt = String::new();
    if !agent.persona.is_empty() {
        prompt.push_str(&agent.persona);
        prompt.push_str("\n\n");
    }
    prompt.push_str(&task.instruction);
    for input in &task.inputs {
        let text = upstream.get(input).ok_or_else(|| VsgError::MissingDependency {
            task: task.id.clone(),
            input: input.clone(),
        })?;
        let source = graph
            .task(input)
            .map(|t| graph.task_agent(t).name.as_str())
            .unwrap_or(input.as_str());
        prompt.push_str("\n\n");
        prompt.push_str(&upstream_header(source, input));
        prompt.push_str("\n\n");
        prompt.push_str(text);
    }
    Ok(prompt)
}
