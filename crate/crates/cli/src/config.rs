use std::path::{Path, PathBuf};

use govsg_agents::vsg::VsgConfig;
use govsg_core::hfs::{EdgeCountMode, HfsOptions};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HfsSettings {
    #[serde(default)]
    pub edge_count_mode: EdgeCountMode,
    #[serde(default)]
    pub label_fallback: bool,
}

impl From<HfsSettings> for HfsOptions {
    fn from(s: HfsSettings) -> Self {
        HfsOptions {
            edge_count_mode: s.edge_count_mode,
            label_fallback: s.label_fallback,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub organism: String,
    pub annotations: PathBuf,
}

/// Whole-pipeline configuration. Relative paths are resolved against the
/// directory holding the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub ontology: PathBuf,
    #[serde(default)]
    pub hfs: HfsSettings,
    pub datasets: Vec<DatasetConfig>,
    /// Terms handed to each organism's agents when the study-group config
    /// leaves them empty.
    #[serde(default = "default_top_terms")]
    pub top_terms: usize,
    pub vsg: Option<VsgConfig>,
    pub out: Option<PathBuf>,
}

fn default_top_terms() -> usize {
    2
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = read_text(path)?;
        let mut cfg: PipelineConfig =
            toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        cfg.ontology = base.join(&cfg.ontology);
        for d in &mut cfg.datasets {
            d.annotations = base.join(&d.annotations);
        }
        if let Some(out) = &cfg.out {
            cfg.out = Some(base.join(out));
        }
        if cfg.datasets.is_empty() {
            return Err(CliError::Input(format!("{}: no datasets configured", path.display())));
        }
        for p in std::iter::once(&cfg.ontology).chain(cfg.datasets.iter().map(|d| &d.annotations)) {
            if !p.is_file() {
                return Err(CliError::Input(format!("{}: file not found", p.display())));
            }
        }
        Ok(cfg)
    }
}
