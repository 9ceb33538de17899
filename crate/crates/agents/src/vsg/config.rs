use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::VsgError;
use govsg_core::TermId;

/// Study-group configuration as read from TOML or JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VsgConfig {
    #[serde(default)]
    pub organisms: Vec<OrganismConfig>,
    pub models: RoleModels,
    #[serde(default)]
    pub personas: Personas,
    #[serde(default)]
    pub sampling: SamplingParams,
    #[serde(default)]
    pub retry: RetrySettings,
    #[serde(default)]
    pub backend: BackendSettings,
    /// Seniors also receive the organism's original task statement.
    #[serde(default = "default_true")]
    pub senior_sees_task: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrganismConfig {
    /// Short identifier used in agent and task ids, e.g. `worm`.
    pub name: String,
    /// Display form used in agent names, e.g. `Worm`.
    pub label: String,
    pub species: String,
    #[serde(default)]
    pub terms: Vec<GoTermRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoTermRef {
    pub id: TermId,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleModels {
    pub junior_a: String,
    pub junior_b: String,
    pub senior: String,
    pub principal_investigator: String,
}

/// Persona preambles. `{organism}` and `{species}` are substituted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Personas {
    #[serde(default = "Personas::default_junior_a")]
    pub junior_a: String,
    #[serde(default = "Personas::default_junior_b")]
    pub junior_b: String,
    #[serde(default = "Personas::default_senior")]
    pub senior: String,
    #[serde(default = "Personas::default_pi")]
    pub principal_investigator: String,
}

impl Personas {
    fn default_junior_a() -> String {
        "You are an early-year PhD student whose research background is mainly {organism} biology.".into()
    }
    fn default_junior_b() -> String {
        "You are an early-year PhD student with a {organism} biology background who reviews a peer's findings critically.".into()
    }
    fn default_senior() -> String {
        "You are a post-doctoral research associate working on {organism} ageing biology.".into()
    }
    fn default_pi() -> String {
        "You are a professor of ageing biology leading a study group.".into()
    }
}

impl Default for Personas {
    fn default() -> Self {
        Personas {
            junior_a: Personas::default_junior_a(),
            junior_b: Personas::default_junior_b(),
            senior: Personas::default_senior(),
            principal_investigator: Personas::default_pi(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingParams {
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "SamplingParams::default_seed")]
    pub seed: Option<u64>,
}

impl SamplingParams {
    fn default_seed() -> Option<u64> {
        Some(42)
    }
}

impl Default for SamplingParams {
    fn default() -> Self {
        SamplingParams {
            temperature: 0.0,
            seed: SamplingParams::default_seed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetrySettings {
    pub max_attempts: u32,
    pub initial_backoff_ms: u64,
    pub timeout_secs: u64,
}

impl Default for RetrySettings {
    fn default() -> Self {
        RetrySettings {
            max_attempts: 3,
            initial_backoff_ms: 1000,
            timeout_secs: 120,
        }
    }
}

impl RetrySettings {
    pub fn policy(&self) -> super::RetryPolicy {
        super::RetryPolicy {
            max_attempts: self.max_attempts.max(1),
            initial_backoff: Duration::from_millis(self.initial_backoff_ms),
            timeout: Duration::from_secs(self.timeout_secs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendSettings {
    #[serde(default)]
    pub url: Option<String>,
    /// Dotted path to the assistant text in the response body.
    #[serde(default = "BackendSettings::default_response_path")]
    pub response_path: String,
}

impl BackendSettings {
    pub const DEFAULT_RESPONSE_PATH: &'static str = "choices.0.message.content";

    fn default_response_path() -> String {
        Self::DEFAULT_RESPONSE_PATH.to_string()
    }
}

impl Default for BackendSettings {
    fn default() -> Self {
        BackendSettings {
            url: None,
            response_path: Self::default_response_path(),
        }
    }
}

/// The part of the configuration that determines what the agents are asked.
#[derive(Serialize)]
struct DigestView<'a> {
    organisms: &'a [OrganismConfig],
    models: &'a RoleModels,
    personas: &'a Personas,
    sampling: &'a SamplingParams,
    senior_sees_task: bool,
}

impl VsgConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, VsgError> {
        toml::from_str(text).map_err(|e| VsgError::Config(e.to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Self, VsgError> {
        serde_json::from_str(text).map_err(|e| VsgError::Config(e.to_string()))
    }

    /// Reads `.json` files as JSON and everything else as TOML.
    pub fn load(path: &Path) -> Result<Self, VsgError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| VsgError::Config(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            Self::from_json_str(&text)
        } else {
            Self::from_toml_str(&text)
        }
    }

    /// SHA-256 over the prompt-relevant configuration. Backend location and
    /// retry timing are excluded so they do not change run identity.
    pub fn digest(&self) -> String {
        let view = DigestView {
            organisms: &self.organisms,
            models: &self.models,
            personas: &self.personas,
            sampling: &self.sampling,
            senior_sees_task: self.senior_sees_task,
        };
        let bytes = serde_json::to_vec(&view).expect("config serialises");
        Sha256::digest(&bytes)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    /// Deterministic run identifier derived from the digest.
    pub fn run_id(&self) -> String {
        format!("run-{}", &self.digest()[..12])
    }
}
