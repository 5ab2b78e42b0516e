use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::evaluate::Classifier;
use crate::samplers::{Sampler, SamplerKind};

/// Settings read from `--config`. Every field is optional; command-line
/// flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub label_column: Option<String>,
    pub positive_label: Option<String>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub output: Option<PathBuf>,
    /// Sampler for `oversample`.
    pub sampler: Option<Sampler>,
    /// Samplers for `benchmark`; `"none"` is the baseline.
    pub samplers: Option<Vec<SamplerSpec>>,
    pub classifiers: Option<Vec<Classifier>>,
    pub repeats: Option<usize>,
    pub folds: Option<usize>,
    pub theory: TheoryConfig,
    /// Synthetic rows to overlay in `project`.
    pub overlay: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TheoryConfig {
    pub f_count: Option<usize>,
    pub dims: Option<usize>,
    pub dof: Option<f64>,
    pub sigma: Option<f64>,
    pub sigma_b: Option<f64>,
    pub trials: Option<usize>,
}

/// A benchmark sampler given either by name or as a full configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SamplerSpec {
    Name(String),
    Full(Sampler),
}

impl SamplerSpec {
    pub fn resolve(&self) -> Result<Option<Sampler>, String> {
        match self {
            SamplerSpec::Full(s) => Ok(Some(s.clone())),
            SamplerSpec::Name(name) => parse_sampler_name(name),
        }
    }
}

/// `"none"` or a sampler name.
pub fn parse_sampler_name(name: &str) -> Result<Option<Sampler>, String> {
    if name == "none" {
        return Ok(None);
    }
    name.parse::<SamplerKind>()
        .map(|k| Some(Sampler::from_kind(k)))
        .map_err(|e| e.to_string())
}

pub fn read_config(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<RunConfig>(r#"{"seed": 1, "sed": 2}"#).is_err());
        assert!(serde_json::from_str::<RunConfig>(r#"{"theory": {"trails": 5}}"#).is_err());
        let cfg: RunConfig = serde_json::from_str(
            r#"{"seed": 3, "samplers": ["none", {"name": "loras", "n_gen": 2}], "classifiers": [{"name": "knn"}]}"#,
        )
        .unwrap();
        let samplers = cfg.samplers.unwrap();
        assert_eq!(samplers[0].resolve().unwrap(), None);
        assert_eq!(samplers[1].resolve().unwrap().unwrap().kind(), SamplerKind::Loras);
    }
}
