use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::AppError;
use crate::evolution::EvolutionMode;
use crate::model::{GridSpec, ScenarioSpec};

/// Either the name of a built-in (or `random:<index>`) or an inline definition.
#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioRef {
    Named(String),
    Inline(Box<ScenarioSpec>),
}

impl Serialize for ScenarioRef {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Self::Named(name) => s.serialize_str(name),
            Self::Inline(spec) => spec.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ScenarioRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct RefVisitor;

        impl<'de> Visitor<'de> for RefVisitor {
            type Value = ScenarioRef;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a scenario name or an inline scenario object")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<ScenarioRef, E> {
                Ok(ScenarioRef::Named(v.to_string()))
            }

            fn visit_map<A: MapAccess<'de>>(self, map: A) -> Result<ScenarioRef, A::Error> {
                let spec = ScenarioSpec::deserialize(de::value::MapAccessDeserializer::new(map))?;
                Ok(ScenarioRef::Inline(Box::new(spec)))
            }
        }

        d.deserialize_any(RefVisitor)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Emit {
    Csv,
    Json,
}

impl std::str::FromStr for Emit {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!(
                "unknown output kind `{other}` (expected csv or json)"
            )),
        }
    }
}

fn default_modes() -> Vec<EvolutionMode> {
    EvolutionMode::ALL.to_vec()
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("tdmetric-out")
}

fn default_emit() -> Vec<Emit> {
    vec![Emit::Csv, Emit::Json]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: ScenarioRef,
    #[serde(default = "default_modes")]
    pub modes: Vec<EvolutionMode>,
    /// Replaces the scenario's own grid when present.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default = "default_emit")]
    pub emit: Vec<Emit>,
    #[serde(default)]
    pub seed: u64,
}

impl RunConfig {
    pub fn for_scenario(name: &str) -> Self {
        Self {
            scenario: ScenarioRef::Named(name.to_string()),
            modes: default_modes(),
            grid: None,
            output_dir: default_output_dir(),
            emit: default_emit(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), AppError> {
        if self.modes.is_empty() {
            return Err(AppError::Validation("modes must be nonempty".into()));
        }
        let mut seen = self.modes.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.modes.len() {
            return Err(AppError::Validation("modes must not repeat".into()));
        }
        if let Some(grid) = self.grid {
            if grid.steps < 10 {
                return Err(AppError::Validation(format!(
                    "grid override needs steps ≥ 10, got {}",
                    grid.steps
                )));
            }
            grid.to_grid()
                .map_err(|e| AppError::Validation(e.to_string()))?;
        }
        if let ScenarioRef::Inline(spec) = &self.scenario {
            spec.grid
                .to_grid()
                .map_err(|e| AppError::Validation(e.to_string()))?;
        }
        Ok(())
    }
}

/// Parses and validates a JSON configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, AppError> {
    let config: RunConfig = serde_json::from_str(text).map_err(|e| AppError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<RunConfig, AppError> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_config(&text)
}
