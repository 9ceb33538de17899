#![allow(dead_code)]

use std::path::PathBuf;
use std::time::Duration;

use govsg_agents::vsg::{
    build_study_group, AgentGraph, MockScript, RetryPolicy, RunParams, VsgConfig,
};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

pub fn study_config() -> VsgConfig {
    VsgConfig::load(&fixture("study_group.toml")).expect("fixture config loads")
}

pub fn study_graph() -> AgentGraph {
    build_study_group(&study_config()).expect("fixture graph builds")
}

/// Config restricted to the first `n` organisms of the fixture.
pub fn config_with(n: usize) -> VsgConfig {
    let mut cfg = study_config();
    cfg.organisms.truncate(n);
    cfg
}

/// A distinct, recognisable response per task.
pub fn canned(task: &str) -> String {
    format!("Scripted finding for {task}. It cites nothing <yet> & waits for review.")
}

pub fn distinct_script(graph: &AgentGraph) -> MockScript {
    let mut script = MockScript::default();
    for t in &graph.tasks {
        script.insert(t.id.clone(), &[canned(&t.id).as_str()], 0);
    }
    script
}

pub fn params(cfg: &VsgConfig, persist: Option<PathBuf>) -> RunParams {
    RunParams {
        run_id: cfg.run_id(),
        config_digest: cfg.digest(),
        sampling: cfg.sampling.clone(),
        retry: RetryPolicy {
            max_attempts: cfg.retry.max_attempts,
            initial_backoff: Duration::ZERO,
            timeout: Duration::from_secs(5),
        },
        persist_dir: persist,
    }
}
