//! Model assembly, the policy triple and scenario-document ingestion.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stochastic::{DamageModel, Distribution};
use crate::strength::StrengthCurve;

pub const SCHEMA_VERSION: u32 = 1;

/// Replacement costs. `c_K` is the corrective (failure) cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostVector {
    #[serde(rename = "c_T")]
    pub c_t: f64,
    #[serde(rename = "c_N")]
    pub c_n: f64,
    #[serde(rename = "c_Z")]
    pub c_z: f64,
    #[serde(rename = "c_K")]
    pub c_k: f64,
}

impl CostVector {
    /// Unit preventive costs and the given failure cost.
    pub fn unit(c_k: f64) -> Self {
        Self {
            c_t: 1.0,
            c_n: 1.0,
            c_z: 1.0,
            c_k,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            c_t: self.c_t * k,
            c_n: self.c_n * k,
            c_z: self.c_z * k,
            c_k: self.c_k * k,
        }
    }

    pub fn with_c_k(&self, c_k: f64) -> Self {
        Self { c_k, ..*self }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        for (name, v) in [
            ("c_T", self.c_t),
            ("c_N", self.c_n),
            ("c_Z", self.c_z),
            ("c_K", self.c_k),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(
                    format!("{path}.{name}"),
                    format!("must be a positive finite number, got {v}"),
                ));
            }
        }
        let preventive = self.c_t.max(self.c_n).max(self.c_z);
        if self.c_k <= preventive {
            return Err(Error::validation(
                format!("{path}.c_K"),
                format!(
                    "failure cost {} must exceed every preventive cost (largest is {preventive})",
                    self.c_k
                ),
            ));
        }
        Ok(())
    }
}

/// Replacement policy. `None` marks an inactive (infinite) component.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Policy {
    #[serde(rename = "T", default)]
    pub t: Option<f64>,
    #[serde(rename = "N", default)]
    pub n: Option<u64>,
    #[serde(rename = "Z", default)]
    pub z: Option<f64>,
}

impl Policy {
    pub fn new(t: Option<f64>, n: Option<u64>, z: Option<f64>) -> Self {
        Self { t, n, z }
    }

    pub fn time(t: f64) -> Self {
        Self::new(Some(t), None, None)
    }

    pub fn count(n: u64) -> Self {
        Self::new(None, Some(n), None)
    }

    pub fn level(z: f64) -> Self {
        Self::new(None, None, Some(z))
    }

    pub fn joint(t: f64, n: u64, z: f64) -> Self {
        Self::new(Some(t), Some(n), Some(z))
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_none() && self.n.is_none() && self.z.is_none()
    }

    pub fn t_or_inf(&self) -> f64 {
        self.t.unwrap_or(f64::INFINITY)
    }

    pub fn z_or_inf(&self) -> f64 {
        self.z.unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<String>| v.unwrap_or_else(|| "inf".into());
        write!(
            f,
            "(T={}, N={}, Z={})",
            show(self.t.map(|v| v.to_string())),
            show(self.n.map(|v| v.to_string())),
            show(self.z.map(|v| v.to_string()))
        )
    }
}

/// One reason a policy is not admissible for a scenario.
#[derive(Debug, Clone, PartialEq)]
pub enum PolicyViolation {
    Empty,
    NonPositiveTime(f64),
    ZeroCount,
    NonPositiveLevel(f64),
    LevelAboveInitialStrength { z: f64, initial: f64 },
    LevelAboveStrengthAtT { z: f64, t: f64, strength: f64 },
}

impl fmt::Display for PolicyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolicyViolation::Empty => write!(f, "empty policy: at least one of T, N, Z must be active"),
            PolicyViolation::NonPositiveTime(t) => write!(f, "T = {t} must be positive"),
            PolicyViolation::ZeroCount => write!(f, "N must be at least 1"),
            PolicyViolation::NonPositiveLevel(z) => write!(f, "Z = {z} must be positive"),
            PolicyViolation::LevelAboveInitialStrength { z, initial } => {
                write!(f, "Z = {z} exceeds the initial strength K(0) = {initial}")
            }
            PolicyViolation::LevelAboveStrengthAtT { z, t, strength } => {
                write!(f, "Z = {z} exceeds K(T) = {strength} at T = {t}")
            }
        }
    }
}

/// The full stochastic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema: u32,
    #[serde(default)]
    pub label: String,
    pub inter_arrival: Distribution,
    pub damage: DamageModel,
    pub strength: StrengthCurve,
    pub costs: CostVector,
}

impl Scenario {
    /// Build and validate a scenario from its parts.
    pub fn new(
        label: impl Into<String>,
        inter_arrival: Distribution,
        damage: DamageModel,
        strength: StrengthCurve,
        costs: CostVector,
    ) -> Result<Self> {
        let s = Self {
            schema: SCHEMA_VERSION,
            label: label.into(),
            inter_arrival,
            damage,
            strength,
            costs,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA_VERSION {
            return Err(Error::validation(
                "schema",
                format!("unsupported schema version {}, expected {SCHEMA_VERSION}", self.schema),
            ));
        }
        self.inter_arrival.validate("inter_arrival")?;
        let mean = self.inter_arrival.mean();
        if !(mean.is_finite() && mean > 0.0) {
            return Err(Error::validation(
                "inter_arrival",
                format!("mean inter-arrival time must be positive and finite, got {mean}"),
            ));
        }
        self.damage.validate("damage")?;
        self.strength.validate("strength")?;
        self.costs.validate("costs")
    }

    /// Mean inter-arrival time.
    pub fn mu_f(&self) -> f64 {
        self.inter_arrival.mean()
    }

    pub fn with_costs(&self, costs: CostVector) -> Self {
        Self {
            costs,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }
}

/// Parse and validate a scenario document.
pub fn load_scenario(document: &str) -> Result<Scenario> {
    let value: serde_json::Value =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    scenario_from_value(value)
}

/// Validate a scenario already parsed as JSON.
pub fn scenario_from_value(value: serde_json::Value) -> Result<Scenario> {
    let scenario: Scenario = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::Schema {
            path,
            message: e.into_inner().to_string(),
        }
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Check a policy against the scenario's strength curve, collecting every violation.
pub fn validate_policy(
    scenario: &Scenario,
    policy: &Policy,
) -> std::result::Result<(), Vec<PolicyViolation>> {
    let mut out = Vec::new();
    if policy.is_empty() {
        out.push(PolicyViolation::Empty);
    }
    if let Some(t) = policy.t {
        if !(t > 0.0) || t.is_nan() {
            out.push(PolicyViolation::NonPositiveTime(t));
        }
    }
    if policy.n == Some(0) {
        out.push(PolicyViolation::ZeroCount);
    }
    if let Some(z) = policy.z {
        let initial = scenario.strength.initial();
        if !(z > 0.0) {
            out.push(PolicyViolation::NonPositiveLevel(z));
        } else if z > initial {
            out.push(PolicyViolation::LevelAboveInitialStrength { z, initial });
        } else if let Some(t) = policy.t.filter(|t| *t > 0.0) {
            let strength = scenario.strength.at(t);
            if z > strength {
                out.push(PolicyViolation::LevelAboveStrengthAtT { z, t, strength });
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// [`validate_policy`] folded into a single validation error.
pub fn check_policy(scenario: &Scenario, policy: &Policy) -> Result<()> {
    validate_policy(scenario, policy).map_err(|v| {
        Error::validation(
            "policy",
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; "),
        )
    })
}
