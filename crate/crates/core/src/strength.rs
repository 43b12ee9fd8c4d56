//! Deterministic strength curves `K(t)` and their analytic inverses.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A continuous, non-increasing strength function on `[0, ∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StrengthCurve {
    Constant {
        #[serde(rename = "K")]
        k: f64,
    },
    /// `max(a - b t, 0)`
    Linear { a: f64, b: f64 },
    /// `A exp(-B t)`
    ExponentialDecay {
        #[serde(rename = "A")]
        a: f64,
        #[serde(rename = "B")]
        b: f64,
    },
}

impl StrengthCurve {
    pub fn validate(&self, path: &str) -> Result<()> {
        let check = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::validation(
                    format!("{path}.{name}"),
                    format!("must be a positive finite number, got {v}"),
                ))
            }
        };
        match *self {
            StrengthCurve::Constant { k } => check("K", k),
            StrengthCurve::Linear { a, b } => {
                check("a", a)?;
                check("b", b)
            }
            StrengthCurve::ExponentialDecay { a, b } => {
                check("A", a)?;
                check("B", b)
            }
        }
    }

    /// `K(t)` for `t >= 0`.
    pub fn at(&self, t: f64) -> f64 {
        match *self {
            StrengthCurve::Constant { k } => k,
            StrengthCurve::Linear { a, b } => (a - b * t).max(0.0),
            StrengthCurve::ExponentialDecay { a, b } => a * (-b * t).exp(),
        }
    }

    pub fn initial(&self) -> f64 {
        self.at(0.0)
    }

    /// Smallest `t >= 0` with `K(t) <= level`, or `None` if strength stays above it.
    pub fn crossing_time(&self, level: f64) -> Option<f64> {
        if level >= self.initial() {
            return Some(0.0);
        }
        match *self {
            StrengthCurve::Constant { .. } => None,
            StrengthCurve::Linear { a, b } => Some((a - level.max(0.0)) / b),
            StrengthCurve::ExponentialDecay { a, b } => {
                if level <= 0.0 {
                    None
                } else {
                    Some((a / level).ln() / b)
                }
            }
        }
    }

    /// Time at which strength first reaches zero, if ever.
    pub fn zero_time(&self) -> Option<f64> {
        match *self {
            StrengthCurve::Linear { a, b } => Some(a / b),
            _ => None,
        }
    }

    /// Time `T0` with `K(T0) = z`; infinite when strength never falls to `z`.
    pub fn z_horizon(&self, z: f64) -> Result<f64> {
        let initial = self.initial();
        if z > initial {
            return Err(Error::InvalidLevel { level: z, initial });
        }
        Ok(self.crossing_time(z).unwrap_or(f64::INFINITY))
    }

    /// Modified replacement level `min(z, K(t))`.
    pub fn modified_level(&self, z: f64, t: f64) -> f64 {
        z.min(self.at(t))
    }
}
