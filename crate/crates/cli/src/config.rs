//! Run configuration: a scenario document plus optional `optimizer` and
//! `numerics` blocks.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use wearout_core::direct::NumericsConfig;
use wearout_core::optimize::{AnnealConfig, GridConfig, Method};
use wearout_core::scenario::scenario_from_value;
use wearout_core::{Error, Result, Scenario};

use crate::bundled::bundled;
use crate::error::{CliError, CliResult};

/// Search bounds per axis; missing axes fall back to the scenario defaults.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Bounds {
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub t: Option<(f64, f64)>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<(u64, u64)>,
    #[serde(rename = "Z", skip_serializing_if = "Option::is_none")]
    pub z: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub method: Method,
    pub grid: GridConfig,
    pub anneal: AnnealConfig,
    pub bounds: Bounds,
    /// Replications per candidate when searching with the simulation engine.
    pub reps: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Grid,
            grid: GridConfig::default(),
            anneal: AnnealConfig::default(),
            bounds: Bounds::default(),
            reps: 10_000,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        let g = &self.grid;
        if g.coarse_points < 2 || g.refine_factor < 1 || g.passes < 1 || g.n_stride == Some(0) {
            return Err(Error::Validation {
                path: "optimizer.grid".into(),
                message: "need coarse_points >= 2, refine_factor >= 1, passes >= 1, n_stride >= 1".into(),
            });
        }
        let a = &self.anneal;
        if !(a.cooling_ratio > 0.0 && a.cooling_ratio < 1.0) || a.steps_per_temp == 0 || a.step_fraction <= 0.0 {
            return Err(Error::Validation {
                path: "optimizer.anneal".into(),
                message: "need 0 < cooling_ratio < 1, steps_per_temp >= 1, step_fraction > 0".into(),
            });
        }
        if self.reps == 0 {
            return Err(Error::Validation {
                path: "optimizer.reps".into(),
                message: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub optimizer: OptimizerConfig,
    pub numerics: NumericsConfig,
}

#[derive(Serialize)]
struct Canonical<'a> {
    scenario: &'a Scenario,
    optimizer: &'a OptimizerConfig,
    numerics: &'a NumericsConfig,
}

impl RunConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            optimizer: OptimizerConfig::default(),
            numerics: NumericsConfig::default(),
        }
    }

    /// SHA-256 of the resolved configuration and any extra run options.
    pub fn hash(&self, options: &str) -> String {
        let canonical = serde_json::to_string(&Canonical {
            scenario: &self.scenario,
            optimizer: &self.optimizer,
            numerics: &self.numerics,
        })
        .expect("config serializes");
        let mut h = Sha256::new();
        h.update(canonical.as_bytes());
        h.update(b"\n");
        h.update(options.as_bytes());
        format!("{:x}", h.finalize())
    }
}

fn block<T: DeserializeOwned + Default>(value: Option<Value>, name: &str) -> Result<T> {
    let Some(value) = value else {
        return Ok(T::default());
    };
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        Error::Schema {
            path: if inner == "." { name.to_string() } else { format!("{name}.{inner}") },
            message: e.into_inner().to_string(),
        }
    })
}

/// Split a configuration document into scenario and blocks and validate each.
pub fn config_from_value(mut doc: Value) -> Result<RunConfig> {
    let obj = doc.as_object_mut().ok_or_else(|| Error::Schema {
        path: ".".into(),
        message: "expected a JSON object".into(),
    })?;
    let optimizer: OptimizerConfig = block(obj.remove("optimizer"), "optimizer")?;
    let numerics: NumericsConfig = block(obj.remove("numerics"), "numerics")?;
    optimizer.validate()?;
    numerics.validate()?;
    Ok(RunConfig {
        scenario: scenario_from_value(doc)?,
        optimizer,
        numerics,
    })
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    config_from_value(parse_json(text)?)
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Input {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_json(&text)?)
}

/// Resolve a scenario argument: an existing file path, else a bundled name.
fn scenario_document(arg: &str) -> CliResult<Value> {
    let path = Path::new(arg);
    if path.exists() {
        return read_json(path);
    }
    match bundled(arg) {
        Some(doc) => Ok(parse_json(doc)?),
        None => Err(CliError::Usage(format!(
            "`{arg}` is neither a readable file nor a bundled scenario"
        ))),
    }
}

/// Build the run configuration from a scenario argument and/or a config file.
///
/// The config file may hold a complete scenario (used when no scenario
/// argument is given); its `optimizer` and `numerics` blocks take precedence
/// over those of the scenario document.
pub fn load_run_config(scenario: Option<&str>, config: Option<&Path>) -> CliResult<RunConfig> {
    let overlay = config.map(read_json).transpose()?;
    let mut doc = match (scenario, &overlay) {
        (Some(arg), _) => scenario_document(arg)?,
        (None, Some(v)) => v.clone(),
        (None, None) => {
            return Err(CliError::Usage(
                "no scenario given: pass a scenario path or bundled name, or --config".into(),
            ))
        }
    };
    if let (Some(_), Some(Value::Object(extra))) = (scenario, overlay) {
        if let Value::Object(obj) = &mut doc {
            for key in ["optimizer", "numerics"] {
                if let Some(v) = extra.get(key) {
                    obj.insert(key.to_string(), v.clone());
                }
            }
        }
    }
    Ok(config_from_value(doc)?)
}

/// Configuration of a bundled scenario.
pub fn bundled_config(name: &str) -> Result<RunConfig> {
    let doc = bundled(name).ok_or_else(|| Error::Validation {
        path: "scenario".into(),
        message: format!("no bundled scenario named `{name}`"),
    })?;
    parse_config(doc)
}
