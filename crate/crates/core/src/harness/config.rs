//! Experiment configuration in TOML.
//!
//! ```toml
//! dim = 20
//! n_arms = 10
//! horizon = 1000
//! n_runs = 10
//! base_seed = 0
//! noise_sd = 0.5
//! lambda = 1.0
//! nu = 0.5
//! delta = 0.05
//! gamma_grid = [0.5, 0.6, 0.7]
//! output_dir = "out/p3"
//!
//! [family]
//! kind = "p3"
//! seed = 7
//!
//! [[policy]]
//! kind = "lints"
//! inference = "exact"
//!
//! [[policy]]
//! kind = "linbucb"
//! inference = "approximate"
//! gamma = 0.6
//! ```
//!
//! Optional keys: `s_bound` (defaults to `‖θ*‖`), `arm_scaling`
//! (`project` or `sphere`), and per policy `estimate_mode`, `scale` and
//! `name`. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::algorithms::{Inference, PolicyConfig, PolicyKind};
use crate::environments::{ArmScaling, BanditInstance, Family};
use crate::error::{Error, Result};
use crate::linalg::{ConfidenceParams, EstimateMode};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub inference: Inference,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "is_default_mode")]
    pub estimate_mode: EstimateMode,
    /// Fixed posterior scale in place of the confidence radius.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

fn is_default_mode(m: &EstimateMode) -> bool {
    *m == EstimateMode::default()
}

impl PolicySpec {
    pub fn new(kind: PolicyKind, inference: Inference) -> Self {
        Self {
            kind,
            inference,
            gamma: None,
            estimate_mode: EstimateMode::default(),
            scale: None,
            name: None,
        }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    /// The four policies compared in the positive experiments.
    pub fn standard_four(gamma: f64) -> Vec<Self> {
        vec![
            Self::new(PolicyKind::LinTS, Inference::Exact),
            Self::new(PolicyKind::LinTS, Inference::Approximate),
            Self::new(PolicyKind::LinBUCB, Inference::Exact).with_gamma(gamma),
            Self::new(PolicyKind::LinBUCB, Inference::Approximate).with_gamma(gamma),
        ]
    }

    pub fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        let cfg = PolicyConfig::new(
            self.kind,
            self.inference,
            ConfidenceParams {
                nu: 0.0,
                lambda: 1.0,
                s_bound: 1.0,
                delta: 0.5,
            },
            1,
        );
        cfg.label()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub n_arms: usize,
    pub horizon: usize,
    pub n_runs: usize,
    pub base_seed: u64,
    pub noise_sd: f64,
    pub lambda: f64,
    pub nu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_bound: Option<f64>,
    pub delta: f64,
    #[serde(default)]
    pub gamma_grid: Vec<f64>,
    #[serde(default)]
    pub arm_scaling: ArmScaling,
    pub output_dir: PathBuf,
    pub family: Family,
    #[serde(rename = "policy")]
    pub policies: Vec<PolicySpec>,
}

fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    /// P3-style setup with the four standard policies.
    pub fn standard(family: Family, dim: usize, horizon: usize, n_runs: usize, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            dim,
            n_arms: 10,
            horizon,
            n_runs,
            base_seed: 0,
            noise_sd: 0.5,
            lambda: 1.0,
            nu: 0.5,
            s_bound: None,
            delta: 0.05,
            gamma_grid: Vec::new(),
            arm_scaling: ArmScaling::Project,
            output_dir: output_dir.into(),
            family,
            policies: PolicySpec::standard_four(0.6),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml_str(&text)
    }

    pub fn instance(&self) -> Result<BanditInstance> {
        Ok(
            BanditInstance::new(self.family.clone(), self.dim, self.n_arms, self.noise_sd)?
                .with_scaling(self.arm_scaling),
        )
    }

    pub fn confidence(&self, instance: &BanditInstance) -> ConfidenceParams {
        ConfidenceParams {
            nu: self.nu,
            lambda: self.lambda,
            s_bound: self.s_bound.unwrap_or_else(|| instance.theta_norm()),
            delta: self.delta,
        }
    }

    pub fn policy_config(&self, spec: &PolicySpec, confidence: ConfidenceParams) -> PolicyConfig {
        PolicyConfig {
            kind: spec.kind,
            inference: spec.inference,
            gamma: spec.gamma,
            confidence,
            horizon: self.horizon,
            estimate_mode: spec.estimate_mode,
            scale_override: spec.scale,
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.policies.iter().map(PolicySpec::label).collect()
    }

    /// Checks every field without touching the filesystem.
    pub fn validate_fields(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(config_err("dim must be positive"));
        }
        if self.n_arms == 0 {
            return Err(config_err("n_arms must be positive"));
        }
        if self.horizon == 0 {
            return Err(config_err("horizon must be positive"));
        }
        if self.n_runs == 0 {
            return Err(config_err("n_runs must be positive"));
        }
        if self.base_seed.checked_add(self.n_runs as u64).is_none() {
            return Err(config_err("base_seed + n_runs overflows"));
        }
        let instance = self.instance().map_err(|e| config_err(e.to_string()))?;
        if let Some(s) = self.s_bound {
            if s < instance.theta_norm() {
                log::warn!(
                    "s_bound {s} is below |theta*| = {:.6}; the confidence radius is not valid",
                    instance.theta_norm()
                );
            }
        }
        let confidence = self.confidence(&instance);
        confidence.validate().map_err(|e| config_err(e.to_string()))?;
        for g in &self.gamma_grid {
            if !(*g > 0.0 && *g < 1.0) {
                return Err(config_err(format!("gamma_grid entry {g} is outside (0, 1)")));
            }
        }
        if self.policies.is_empty() {
            return Err(config_err("at least one [[policy]] is required"));
        }
        let mut labels = Vec::new();
        for spec in &self.policies {
            self.policy_config(spec, confidence)
                .validate()
                .map_err(|e| config_err(format!("policy {}: {e}", spec.label())))?;
            let label = spec.label();
            if label.contains(',') || label.contains('\n') {
                return Err(config_err(format!(
                    "policy name {label:?} may not contain commas or newlines"
                )));
            }
            if labels.contains(&label) {
                return Err(config_err(format!(
                    "duplicate policy label {label}; set `name` to disambiguate"
                )));
            }
            labels.push(label);
        }
        Ok(())
    }

    /// Field checks plus a write probe on `output_dir`.
    pub fn validate(&self) -> Result<()> {
        self.validate_fields()?;
        ensure_writable(&self.output_dir)
    }
}

/// Creates `dir` if needed and checks that a file can be written inside it.
pub fn ensure_writable(dir: &Path) -> Result<()> {
    let io = |e: std::io::Error| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    };
    fs::create_dir_all(dir).map_err(io)?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(io)?;
    fs::remove_file(&probe).map_err(io)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
dim = 3
n_arms = 4
horizon = 20
n_runs = 2
base_seed = 5
noise_sd = 0.5
lambda = 1.0
nu = 0.5
delta = 0.05
output_dir = "out"

[family]
kind = "p3"
seed = 7

[[policy]]
kind = "lints"
inference = "exact"

[[policy]]
kind = "linbucb"
inference = "approximate"
gamma = 0.6
"#;

    #[test]
    fn parses_and_round_trips() {
        let cfg = ExperimentConfig::from_toml_str(EXAMPLE).unwrap();
        assert_eq!(cfg.family, Family::P3 { seed: 7 });
        assert_eq!(cfg.policies.len(), 2);
        assert_eq!(cfg.labels(), vec!["LinTS", "LinBUCB_Approximate"]);
        cfg.validate_fields().unwrap();
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = EXAMPLE.replace("n_runs = 2", "n_runs = 2\nn_rnus = 3");
        assert!(matches!(ExperimentConfig::from_toml_str(&bad), Err(Error::Config(_))));
        let bad = EXAMPLE.replace("gamma = 0.6", "gamma = 0.6\ngama = 0.7");
        assert!(ExperimentConfig::from_toml_str(&bad).is_err());
    }

    #[test]
    fn invalid_fields_fail_validation() {
        let base = ExperimentConfig::from_toml_str(EXAMPLE).unwrap();
        let mut c = base.clone();
        c.delta = 1.5;
        assert!(c.validate_fields().is_err());
        let mut c = base.clone();
        c.policies[1].gamma = None;
        assert!(c.validate_fields().is_err());
        let mut c = base.clone();
        c.gamma_grid = vec![0.5, 1.0];
        assert!(c.validate_fields().is_err());
        let mut c = base.clone();
        c.policies.push(c.policies[0].clone());
        assert!(c.validate_fields().is_err());
        let mut c = base;
        c.n_runs = 0;
        assert!(c.validate_fields().is_err());
    }

    #[test]
    fn unwritable_output_is_caught_up_front() {
        let tmp = tempfile::tempdir().unwrap();
        let file = tmp.path().join("occupied");
        fs::write(&file, b"x").unwrap();
        let mut cfg = ExperimentConfig::from_toml_str(EXAMPLE).unwrap();
        cfg.output_dir = file.join("sub");
        assert!(matches!(cfg.validate(), Err(Error::Io { .. })));
        cfg.output_dir = tmp.path().join("fresh");
        cfg.validate().unwrap();
    }

    #[test]
    fn default_s_bound_is_theta_norm() {
        let mut cfg = ExperimentConfig::from_toml_str(EXAMPLE).unwrap();
        cfg.family = Family::P1;
        let inst = cfg.instance().unwrap();
        assert!((cfg.confidence(&inst).s_bound - 3f64.sqrt()).abs() < 1e-15);
    }
}
