//! Experiment configuration files and `--set path=value` overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algorithms::{LearnerSpec, Mode};
use crate::error::{config, Error, Result};
use crate::geometry::{FeasibleSet, Regularizer};
use crate::losses::{AdversaryKind, CompositeKind};
use crate::metrics::BoundName;

/// Feasible set, sized by the experiment's `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetSpec {
    /// Ball of the given radius centered at the origin.
    Ball { radius: f64 },
    /// The cube `[lower, upper]^d`.
    Box { lower: f64, upper: f64 },
    Simplex,
}

impl SetSpec {
    pub fn build(&self, dim: usize) -> Result<FeasibleSet> {
        match *self {
            SetSpec::Ball { radius } => FeasibleSet::centered_ball(dim, radius),
            SetSpec::Box { lower, upper } => FeasibleSet::uniform_box(dim, lower, upper),
            SetSpec::Simplex => FeasibleSet::simplex(dim),
        }
    }
}

impl Default for SetSpec {
    fn default() -> Self {
        SetSpec::Ball { radius: 1.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Growth-rate check over the configured horizons.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlopeSpec {
    /// Stated regret exponent.
    pub exponent: f64,
}

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_name() -> String {
    "experiment".into()
}
fn default_dim() -> usize {
    2
}
fn default_horizons() -> Vec<usize> {
    vec![64]
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}
fn default_regularizer() -> Regularizer {
    Regularizer::HalfSquaredL2
}
fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub learner: LearnerSpec,
    pub adversary: AdversaryKind,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default = "default_horizons")]
    pub horizons: Vec<usize>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub set: SetSpec,
    #[serde(default = "default_regularizer")]
    pub regularizer: Regularizer,
    #[serde(default)]
    pub composite: CompositeKind,
    #[serde(default)]
    pub mode: Mode,
    /// Bounds to check; all applicable ones when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundName>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<SlopeSpec>,
    /// Abort on truncated solves and uncertified hindsight optima.
    #[serde(default)]
    pub strict: bool,
    /// Check the configuration against the premises of the learner's bound.
    #[serde(default = "default_true")]
    pub validate: bool,
    #[serde(default)]
    pub output: OutputSpec,
}

impl ExperimentConfig {
    /// Parses a TOML document, applying `path=value` overrides first.
    pub fn from_toml_str(text: &str, overrides: &[String]) -> Result<Self> {
        let mut value: toml::Value = toml::from_str(text).map_err(|e| config(format!("invalid TOML: {e}")))?;
        for o in overrides {
            apply_override(&mut value, o)?;
        }
        let cfg: ExperimentConfig =
            serde_path_to_error::deserialize(value).map_err(|e| config(format!("at `{}`: {}", e.path(), e.inner())))?;
        cfg.validate_schema()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &[String]) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text, overrides)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Serde(e.to_string()))
    }

    fn validate_schema(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(config("at `dim`: must be at least 1"));
        }
        if self.horizons.is_empty() {
            return Err(config("at `horizons`: at least one horizon is required"));
        }
        if self.seeds.is_empty() {
            return Err(config("at `seeds`: at least one seed is required"));
        }
        if self.slope.is_some() && self.horizons.len() < 2 {
            return Err(config("at `slope`: a slope fit needs at least two horizons"));
        }
        if let Mode::Approx { delta } = self.mode {
            delta.check_positive("mode.delta").map_err(|e| config(format!("at `mode.delta`: {e}")))?;
        }
        self.adversary.validate().map_err(|e| config(format!("at `adversary`: {e}")))?;
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON encoding, output settings excluded.
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.output = OutputSpec::default();
        let json = serde_json::to_string(&canonical).expect("configs serialize");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }
}

/// Sets `a.b.c = value` in a TOML tree; `value` is parsed as TOML and falls
/// back to a bare string.
pub fn apply_override(root: &mut toml::Value, assignment: &str) -> Result<()> {
    let (path, raw) =
        assignment.split_once('=').ok_or_else(|| config(format!("override `{assignment}` is not of the form path=value")))?;
    let path = path.trim();
    let raw = raw.trim();
    let value = match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t.remove("v").expect("parsed key"),
        Err(_) => toml::Value::String(raw.to_string()),
    };
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(config(format!("override path `{path}` is malformed")));
    }
    let mut node = root;
    for (i, key) in keys.iter().enumerate() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| config(format!("override path `{}` crosses a non-table value", keys[..i].join("."))))?;
        if i + 1 == keys.len() {
            table.insert(key.to_string(), value);
            return Ok(());
        }
        node = table.entry(key.to_string()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    unreachable!("paths have at least one key")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{LearnerKind, Schedule};

    const MINIMAL: &str = r#"
        [learner]
        kind = "ftl"
        regime = "strongly_convex"

        [adversary]
        suite = "quadratic"
    "#;

    #[test]
    fn minimal_config_takes_defaults() {
        let cfg = ExperimentConfig::from_toml_str(MINIMAL, &[]).unwrap();
        assert_eq!(cfg.learner.kind, LearnerKind::Ftl);
        assert_eq!(cfg.dim, 2);
        assert_eq!(cfg.mode, Mode::Exact);
        assert!(cfg.validate);
    }

    #[test]
    fn overrides_reach_nested_fields() {
        let cfg = ExperimentConfig::from_toml_str(
            MINIMAL,
            &["horizons=[16, 32]".into(), "mode.kind=approx".into(), "mode.delta={kind=\"inverse_t\", c=1.0}".into()],
        )
        .unwrap();
        assert_eq!(cfg.horizons, vec![16, 32]);
        assert_eq!(cfg.mode, Mode::Approx { delta: Schedule::InverseT { c: 1.0 } });
    }

    #[test]
    fn schema_errors_name_the_field() {
        let err = ExperimentConfig::from_toml_str(MINIMAL, &["learner.eta.kind=bogus".into()]).unwrap_err();
        assert!(err.to_string().contains("learner.eta"), "{err}");
        let err = ExperimentConfig::from_toml_str(MINIMAL, &["dim=0".into()]).unwrap_err();
        assert!(err.to_string().contains("dim"), "{err}");
    }

    #[test]
    fn round_trip_and_stable_hash() {
        let cfg = ExperimentConfig::from_toml_str(MINIMAL, &["seeds=[1,2]".into()]).unwrap();
        let text = cfg.to_toml_string().unwrap();
        let back = ExperimentConfig::from_toml_str(&text, &[]).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.hash(), back.hash());
        let mut moved = cfg.clone();
        moved.output.path = Some("elsewhere.csv".into());
        assert_eq!(cfg.hash(), moved.hash());
        moved.seeds.push(3);
        assert_ne!(cfg.hash(), moved.hash());
    }
}
