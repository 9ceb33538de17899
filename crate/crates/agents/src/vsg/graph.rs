use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::config::{GoTermRef, OrganismConfig, VsgConfig};
use super::VsgError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    JuniorA,
    JuniorB,
    Senior,
    PrincipalInvestigator,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::JuniorA => "junior_a",
            Role::JuniorB => "junior_b",
            Role::Senior => "senior",
            Role::PrincipalInvestigator => "principal_investigator",
        }
    }

    pub fn layer(self) -> u8 {
        match self {
            Role::JuniorA | Role::JuniorB => 1,
            Role::Senior => 2,
            Role::PrincipalInvestigator => 3,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentSpec {
    pub id: String,
    /// Human-readable name, e.g. "Virtual Junior Worm Researcher A".
    pub name: String,
    pub role: Role,
    pub organism: Option<String>,
    pub model: String,
    pub persona: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskSpec {
    pub id: String,
    pub agent: String,
    pub layer: u8,
    pub instruction: String,
    /// Upstream task ids whose outputs are appended to the prompt.
    pub inputs: Vec<String>,
    pub go_terms: Vec<GoTermRef>,
}

/// Agents and tasks of the three-layer study group. Tasks are stored in
/// canonical order: layer, then organism as configured, then A before B.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentGraph {
    pub agents: Vec<AgentSpec>,
    pub tasks: Vec<TaskSpec>,
    pub organisms: Vec<String>,
}

pub const PI_AGENT_ID: &str = "principal_investigator";
pub const PI_TASK_ID: &str = "final_report";

pub fn agent_id(organism: &str, role: Role) -> String {
    match role {
        Role::PrincipalInvestigator => PI_AGENT_ID.to_string(),
        _ => format!("{organism}/{role}"),
    }
}

pub fn task_id(organism: &str, role: Role) -> String {
    match role {
        Role::JuniorA => format!("{organism}/investigate"),
        Role::JuniorB => format!("{organism}/critique"),
        Role::Senior => format!("{organism}/summarise"),
        Role::PrincipalInvestigator => PI_TASK_ID.to_string(),
    }
}

fn agent_name(org: Option<&OrganismConfig>, role: Role) -> String {
    let label = org.map_or("", |o| o.label.as_str());
    match role {
        Role::JuniorA => format!("Virtual Junior {label} Researcher A"),
        Role::JuniorB => format!("Virtual Junior {label} Researcher B"),
        Role::Senior => format!("Virtual Senior {label} Researcher"),
        Role::PrincipalInvestigator => "Virtual Principal Investigator".to_string(),
    }
}

/// "a", "a and b", "a, b and c"
fn join_and(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} and {last}", init.join(", ")),
    }
}

fn persona(template: &str, org: Option<&OrganismConfig>) -> String {
    match org {
        Some(o) => template
            .replace("{organism}", &o.label.to_lowercase())
            .replace("{species}", &o.species),
        None => template.to_string(),
    }
}

fn investigation_statement(org: &OrganismConfig) -> String {
    let labels: Vec<&str> = org.terms.iter().map(|t| t.label.as_str()).collect();
    format!(
        "Investigate the associations between {} and ageing processes in {}.",
        labels.join(", "),
        org.species
    )
}

/// Builds the 3n+1 agent study group for n configured organisms.
pub fn build_study_group(cfg: &VsgConfig) -> Result<AgentGraph, VsgError> {
    if cfg.organisms.is_empty() {
        return Err(VsgError::IncompleteConfig("no organisms configured".into()));
    }
    for (role, model) in [
        ("junior_a", &cfg.models.junior_a),
        ("junior_b", &cfg.models.junior_b),
        ("senior", &cfg.models.senior),
        ("principal_investigator", &cfg.models.principal_investigator),
    ] {
        if model.trim().is_empty() {
            return Err(VsgError::IncompleteConfig(format!("no model for role {role}")));
        }
    }

    let mut agents = Vec::new();
    let mut layer1 = Vec::new();
    let mut layer2 = Vec::new();
    let mut senior_names = Vec::new();
    let mut senior_tasks = Vec::new();

    for org in &cfg.organisms {
        if org.name.trim().is_empty() || org.species.trim().is_empty() {
            return Err(VsgError::IncompleteConfig(format!(
                "organism entry {:?} needs a name and a species",
                org.name
            )));
        }
        if org.terms.is_empty() {
            return Err(VsgError::IncompleteConfig(format!(
                "organism {} has no GO terms",
                org.name
            )));
        }
        let spec = |role: Role, model: &str, template: &str| AgentSpec {
            id: agent_id(&org.name, role),
            name: agent_name(Some(org), role),
            role,
            organism: Some(org.name.clone()),
            model: model.to_string(),
            persona: persona(template, Some(org)),
        };
        let a = spec(Role::JuniorA, &cfg.models.junior_a, &cfg.personas.junior_a);
        let b = spec(Role::JuniorB, &cfg.models.junior_b, &cfg.personas.junior_b);
        let s = spec(Role::Senior, &cfg.models.senior, &cfg.personas.senior);

        let statement = investigation_statement(org);
        layer1.push(TaskSpec {
            id: task_id(&org.name, Role::JuniorA),
            agent: a.id.clone(),
            layer: 1,
            instruction: statement.clone(),
            inputs: Vec::new(),
            go_terms: org.terms.clone(),
        });
        layer1.push(TaskSpec {
            id: task_id(&org.name, Role::JuniorB),
            agent: b.id.clone(),
            layer: 1,
            instruction: format!("Provide critical comments against the report made by {}.", a.name),
            inputs: vec![task_id(&org.name, Role::JuniorA)],
            go_terms: org.terms.clone(),
        });
        let mut senior_instruction = format!(
            "Summarise the findings and the corresponding critiques, and provide critical comments against the reports made by {} and {}.",
            a.name, b.name
        );
        if cfg.senior_sees_task {
            senior_instruction.push_str(&format!(" The original task was: {statement}"));
        }
        layer2.push(TaskSpec {
            id: task_id(&org.name, Role::Senior),
            agent: s.id.clone(),
            layer: 2,
            instruction: senior_instruction,
            inputs: vec![task_id(&org.name, Role::JuniorA), task_id(&org.name, Role::JuniorB)],
            go_terms: Vec::new(),
        });
        senior_names.push(s.name.clone());
        senior_tasks.push(task_id(&org.name, Role::Senior));
        agents.extend([a, b, s]);
    }

    let pi = AgentSpec {
        id: PI_AGENT_ID.to_string(),
        name: agent_name(None, Role::PrincipalInvestigator),
        role: Role::PrincipalInvestigator,
        organism: None,
        model: cfg.models.principal_investigator.clone(),
        persona: persona(&cfg.personas.principal_investigator, None),
    };
    let pi_task = TaskSpec {
        id: PI_TASK_ID.to_string(),
        agent: pi.id.clone(),
        layer: 3,
        instruction: format!(
            "Provide a final report with critical comments, considering the findings about all {} model organisms in the reports made by {}.",
            cfg.organisms.len(),
            join_and(&senior_names)
        ),
        inputs: senior_tasks,
        go_terms: Vec::new(),
    };
    agents.push(pi);

    let mut tasks = layer1;
    tasks.extend(layer2);
    tasks.push(pi_task);
    let graph = AgentGraph {
        agents,
        tasks,
        organisms: cfg.organisms.iter().map(|o| o.name.clone()).collect(),
    };
    graph.validate()?;
    Ok(graph)
}

impl AgentGraph {
    pub fn agent(&self, id: &str) -> Option<&AgentSpec> {
        self.agents.iter().find(|a| a.id == id)
    }

    pub fn task(&self, id: &str) -> Option<&TaskSpec> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn task_agent(&self, task: &TaskSpec) -> &AgentSpec {
        self.agent(&task.agent).expect("validated graph")
    }

    /// Total number of (upstream → task) dependency edges.
    pub fn dependency_edges(&self) -> usize {
        self.tasks.iter().map(|t| t.inputs.len()).sum()
    }

    /// Checks id uniqueness, agent references, layering and acyclicity.
    pub fn validate(&self) -> Result<(), VsgError> {
        let mut agent_ids = BTreeSet::new();
        for a in &self.agents {
            if !agent_ids.insert(a.id.as_str()) {
                return Err(VsgError::DuplicateAgent(a.id.clone()));
            }
            let binds = a.organism.is_some();
            if binds == (a.role == Role::PrincipalInvestigator) {
                return Err(VsgError::IncompleteConfig(format!(
                    "agent {} has an inconsistent organism binding",
                    a.id
                )));
            }
        }
        let mut layer_of: BTreeMap<&str, u8> = BTreeMap::new();
        for t in &self.tasks {
            if layer_of.insert(t.id.as_str(), t.layer).is_some() {
                return Err(VsgError::DuplicateTask(t.id.clone()));
            }
            let agent = self
                .agent(&t.agent)
                .ok_or_else(|| VsgError::IncompleteConfig(format!("task {} has no agent", t.id)))?;
            if agent.role.layer() != t.layer {
                return Err(VsgError::IncompleteConfig(format!(
                    "task {} is in layer {} but its agent is a {}",
                    t.id, t.layer, agent.role
                )));
            }
        }
        for t in &self.tasks {
            for input in &t.inputs {
                if !layer_of.contains_key(input.as_str()) {
                    return Err(VsgError::MissingDependency {
                        task: t.id.clone(),
                        input: input.clone(),
                    });
                }
            }
        }
        self.execution_order().map(|_| ())
    }

    /// Kahn order over task dependencies, ties resolved by canonical position.
    pub fn execution_order(&self) -> Result<Vec<&TaskSpec>, VsgError> {
        let position: BTreeMap<&str, usize> =
            self.tasks.iter().enumerate().map(|(i, t)| (t.id.as_str(), i)).collect();
        let mut pending: Vec<usize> = self.tasks.iter().map(|t| t.inputs.len()).collect();
        let mut done = vec![false; self.tasks.len()];
        let mut order = Vec::with_capacity(self.tasks.len());
        while order.len() < self.tasks.len() {
            let next = (0..self.tasks.len()).find(|&i| !done[i] && pending[i] == 0);
            let Some(i) = next else {
                let stuck = (0..self.tasks.len()).find(|&i| !done[i]).unwrap_or(0);
                return Err(VsgError::CyclicTasks(self.tasks[stuck].id.clone()));
            };
            done[i] = true;
            order.push(&self.tasks[i]);
            for (j, t) in self.tasks.iter().enumerate() {
                let hits = t.inputs.iter().filter(|inp| position.get(inp.as_str()) == Some(&i)).count();
                pending[j] -= hits;
            }
        }
        Ok(order)
    }
}
