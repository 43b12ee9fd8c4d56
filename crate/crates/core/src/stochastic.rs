//! Inter-arrival and damage distributions, damage-sequence models and the
//! replication-indexed random stream.
//!
//! Exponential, log-normal and Weibull variates are produced by inverting the
//! CDF at a single uniform, so a stream advances by exactly one draw per
//! variate for those laws. Gamma variates use Marsaglia–Tsang rejection.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution as _;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::simulate::SHOCK_CAP;
use crate::special::reg_lower_gamma;

/// Reproducible source of uniforms for one replication.
///
/// The variate sequence depends only on `(master_seed, replication_index)`:
/// the seed keys a ChaCha8 generator and the replication index selects its
/// stream, so replications never share output.
#[derive(Debug, Clone)]
pub struct RandomStream {
    master_seed: u64,
    replication_index: u64,
    draws: u64,
    rng: ChaCha8Rng,
}

impl RandomStream {
    pub fn new(master_seed: u64, replication_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(replication_index);
        Self {
            master_seed,
            replication_index,
            draws: 0,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn replication_index(&self) -> u64 {
        self.replication_index
    }

    /// Number of variates drawn so far.
    pub fn draw_counter(&self) -> u64 {
        self.draws
    }

    /// Uniform on the open interval (0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.draws += 1;
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    fn gamma_variate(&mut self, shape: f64, scale: f64) -> f64 {
        self.draws += 1;
        rand_distr::Gamma::new(shape, scale)
            .expect("gamma parameters validated at construction")
            .sample(&mut self.rng)
    }
}

pub(crate) fn standard_normal_quantile(u: f64) -> f64 {
    Normal::standard().inverse_cdf(u)
}

/// A univariate law on the non-negative reals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "DistributionDoc")]
pub enum Distribution {
    Exponential { rate: f64 },
    #[serde(rename = "lognormal")]
    LogNormal { mu: f64, sigma: f64 },
    Weibull { scale: f64, shape: f64 },
    Gamma { scale: f64, shape: f64 },
    Deterministic { value: f64 },
}

/// Wire form: gamma may be given by `scale` or by `rate`.
#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DistributionDoc {
    Exponential {
        rate: f64,
    },
    #[serde(rename = "lognormal")]
    LogNormal {
        mu: f64,
        sigma: f64,
    },
    Weibull {
        scale: f64,
        shape: f64,
    },
    Gamma {
        shape: f64,
        scale: Option<f64>,
        rate: Option<f64>,
    },
    Deterministic {
        value: f64,
    },
}

impl TryFrom<DistributionDoc> for Distribution {
    type Error = String;

    fn try_from(doc: DistributionDoc) -> std::result::Result<Self, String> {
        Ok(match doc {
            DistributionDoc::Exponential { rate } => Distribution::Exponential { rate },
            DistributionDoc::LogNormal { mu, sigma } => Distribution::LogNormal { mu, sigma },
            DistributionDoc::Weibull { scale, shape } => Distribution::Weibull { scale, shape },
            DistributionDoc::Gamma { shape, scale, rate } => match (scale, rate) {
                (Some(scale), None) => Distribution::Gamma { scale, shape },
                (None, Some(rate)) => Distribution::Gamma {
                    scale: 1.0 / rate,
                    shape,
                },
                _ => return Err("gamma needs exactly one of `scale` or `rate`".into()),
            },
            DistributionDoc::Deterministic { value } => Distribution::Deterministic { value },
        })
    }
}

fn require_positive(path: &str, name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::validation(
            format!("{path}.{name}"),
            format!("must be a positive finite number, got {v}"),
        ))
    }
}

impl Distribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        let d = Distribution::Exponential { rate };
        d.validate("dist")?;
        Ok(d)
    }

    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        let d = Distribution::LogNormal { mu, sigma };
        d.validate("dist")?;
        Ok(d)
    }

    pub fn weibull(scale: f64, shape: f64) -> Result<Self> {
        let d = Distribution::Weibull { scale, shape };
        d.validate("dist")?;
        Ok(d)
    }

    pub fn gamma(scale: f64, shape: f64) -> Result<Self> {
        let d = Distribution::Gamma { scale, shape };
        d.validate("dist")?;
        Ok(d)
    }

    pub fn deterministic(value: f64) -> Result<Self> {
        let d = Distribution::Deterministic { value };
        d.validate("dist")?;
        Ok(d)
    }

    /// Check parameter domains, reporting offending fields under `path`.
    pub fn validate(&self, path: &str) -> Result<()> {
        match *self {
            Distribution::Exponential { rate } => require_positive(path, "rate", rate),
            Distribution::LogNormal { mu, sigma } => {
                if !mu.is_finite() {
                    return Err(Error::validation(format!("{path}.mu"), "must be finite"));
                }
                require_positive(path, "sigma", sigma)
            }
            Distribution::Weibull { scale, shape } | Distribution::Gamma { scale, shape } => {
                require_positive(path, "scale", scale)?;
                require_positive(path, "shape", shape)
            }
            Distribution::Deterministic { value } => {
                if value.is_finite() && value >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::validation(
                        format!("{path}.value"),
                        format!("must be a non-negative finite number, got {value}"),
                    ))
                }
            }
        }
    }

    /// Draw one variate.
    pub fn sample(&self, stream: &mut RandomStream) -> f64 {
        match *self {
            Distribution::Exponential { rate } => -stream.uniform().ln() / rate,
            Distribution::LogNormal { mu, sigma } => {
                (mu + sigma * standard_normal_quantile(stream.uniform())).exp()
            }
            Distribution::Weibull { scale, shape } => {
                scale * (-stream.uniform().ln()).powf(1.0 / shape)
            }
            Distribution::Gamma { scale, shape } => stream.gamma_variate(shape, scale),
            Distribution::Deterministic { value } => {
                // keeps draw counts aligned with the other laws
                stream.uniform();
                value
            }
        }
    }

    /// `P[X <= x]`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match *self {
            Distribution::Deterministic { value } => {
                if x >= value {
                    1.0
                } else {
                    0.0
                }
            }
            _ if x <= 0.0 => 0.0,
            Distribution::Exponential { rate } => -(-rate * x).exp_m1(),
            Distribution::LogNormal { mu, sigma } => {
                0.5 * erfc(-(x.ln() - mu) / (sigma * std::f64::consts::SQRT_2))
            }
            Distribution::Weibull { scale, shape } => -(-(x / scale).powf(shape)).exp_m1(),
            Distribution::Gamma { scale, shape } => reg_lower_gamma(shape, x / scale),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Distribution::Exponential { rate } => 1.0 / rate,
            Distribution::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
            Distribution::Weibull { scale, shape } => scale * gamma(1.0 + 1.0 / shape),
            Distribution::Gamma { scale, shape } => scale * shape,
            Distribution::Deterministic { value } => value,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Distribution::Exponential { rate } => 1.0 / (rate * rate),
            Distribution::LogNormal { mu, sigma } => {
                let s2 = sigma * sigma;
                s2.exp_m1() * (2.0 * mu + s2).exp()
            }
            Distribution::Weibull { scale, shape } => {
                let g1 = gamma(1.0 + 1.0 / shape);
                scale * scale * (gamma(1.0 + 2.0 / shape) - g1 * g1)
            }
            Distribution::Gamma { scale, shape } => shape * scale * scale,
            Distribution::Deterministic { .. } => 0.0,
        }
    }
}

/// CDF of the sum of `j` iid Exponential(`rate`) variables.
pub fn erlang_cdf(j: u64, rate: f64, x: f64) -> f64 {
    assert!(j >= 1, "erlang_cdf needs j >= 1");
    if x <= 0.0 {
        return 0.0;
    }
    reg_lower_gamma(j as f64, rate * x)
}

/// Law family of a non-identically distributed damage schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleFamily {
    Gamma,
    Weibull,
}

/// How the scale parameter moves from one shock to the next.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Progression {
    Arithmetic { step: f64 },
    Geometric { ratio: f64 },
}

/// Which parameter of a damage schedule follows the progression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduledParameter {
    #[default]
    Scale,
    /// The progression gives the rate; the scale is its reciprocal.
    Rate,
}

/// Law of the shared and per-shock components of additive dependent damage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentLaw {
    /// Gamma with shape `theta` and unit scale.
    #[default]
    GammaShape,
    /// Exponential with mean `theta`.
    Exponential,
}

/// Model for the damage sequence `W_1, W_2, ...` of one lifetime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DamageModel {
    Iid {
        dist: Distribution,
    },
    IndependentSchedule {
        family: ScheduleFamily,
        /// First value of the scheduled parameter.
        base_scale: f64,
        shape: f64,
        progression: Progression,
        #[serde(default)]
        parameter: ScheduledParameter,
    },
    /// `W_i = Z_0 + Z_i`, with `Z_0` drawn once per lifetime.
    DependentAdditive {
        theta0: f64,
        theta: f64,
        #[serde(default)]
        component: ComponentLaw,
    },
}

impl DamageModel {
    pub fn iid(dist: Distribution) -> Self {
        DamageModel::Iid { dist }
    }

    pub fn validate(&self, path: &str) -> Result<()> {
        match *self {
            DamageModel::Iid { dist } => dist.validate(&format!("{path}.dist")),
            DamageModel::IndependentSchedule {
                base_scale,
                shape,
                progression,
                ..
            } => {
                require_positive(path, "base_scale", base_scale)?;
                require_positive(path, "shape", shape)?;
                match progression {
                    Progression::Arithmetic { step } => {
                        if !step.is_finite() {
                            return Err(Error::validation(
                                format!("{path}.progression.step"),
                                "must be finite",
                            ));
                        }
                        if step < 0.0 {
                            // first index whose scale is no longer positive
                            let first_bad = (base_scale / -step).floor() as u64 + 1;
                            if first_bad <= SHOCK_CAP {
                                return Err(Error::InvalidSchedule {
                                    index: first_bad,
                                    scale: base_scale + (first_bad - 1) as f64 * step,
                                });
                            }
                        }
                        Ok(())
                    }
                    Progression::Geometric { ratio } => {
                        require_positive(&format!("{path}.progression"), "ratio", ratio)
                    }
                }
            }
            DamageModel::DependentAdditive { theta0, theta, .. } => {
                require_positive(path, "theta0", theta0)?;
                require_positive(path, "theta", theta)
            }
        }
    }

    /// Scheduled parameter of the `i`-th damage (1-based).
    pub fn schedule_scale(base_scale: f64, progression: Progression, i: u64) -> f64 {
        let k = (i - 1) as f64;
        match progression {
            Progression::Arithmetic { step } => base_scale + k * step,
            Progression::Geometric { ratio } => base_scale * ratio.powf(k),
        }
    }

    /// Draw the `i`-th damage (1-based) of the current lifetime.
    ///
    /// `shared` carries the lifetime-wide component of dependent damage. It
    /// must be `None` at `i = 1` and the returned value threaded through every
    /// later call of the same lifetime.
    pub fn damage_at(
        &self,
        i: u64,
        stream: &mut RandomStream,
        shared: Option<f64>,
    ) -> Result<(f64, Option<f64>)> {
        debug_assert!(i >= 1);
        match *self {
            DamageModel::Iid { dist } => Ok((dist.sample(stream), shared)),
            DamageModel::IndependentSchedule {
                family,
                base_scale,
                shape,
                progression,
                parameter,
            } => {
                let value = Self::schedule_scale(base_scale, progression, i);
                if value.is_nan() || value < 0.0 {
                    return Err(Error::InvalidSchedule { index: i, scale: value });
                }
                if value == 0.0 {
                    if matches!(progression, Progression::Arithmetic { .. }) {
                        return Err(Error::InvalidSchedule { index: i, scale: value });
                    }
                    // geometric decay underflowed: take the limiting damage
                    stream.uniform();
                    let limit = match parameter {
                        ScheduledParameter::Scale => 0.0,
                        ScheduledParameter::Rate => f64::INFINITY,
                    };
                    return Ok((limit, shared));
                }
                let scale = match parameter {
                    ScheduledParameter::Scale => value,
                    ScheduledParameter::Rate => 1.0 / value,
                };
                let dist = match family {
                    ScheduleFamily::Gamma => Distribution::Gamma { scale, shape },
                    ScheduleFamily::Weibull => Distribution::Weibull { scale, shape },
                };
                Ok((dist.sample(stream), shared))
            }
            DamageModel::DependentAdditive {
                theta0,
                theta,
                component,
            } => {
                let draw = |stream: &mut RandomStream, t: f64| match component {
                    ComponentLaw::GammaShape => stream.gamma_variate(t, 1.0),
                    ComponentLaw::Exponential => -stream.uniform().ln() * t,
                };
                let z0 = match shared {
                    Some(z0) => z0,
                    None => draw(stream, theta0),
                };
                let zi = draw(stream, theta);
                Ok((z0 + zi, Some(z0)))
            }
        }
    }

    /// Mean of the `i`-th damage.
    pub fn mean_at(&self, i: u64) -> f64 {
        match *self {
            DamageModel::Iid { dist } => dist.mean(),
            DamageModel::IndependentSchedule {
                family,
                base_scale,
                shape,
                progression,
                parameter,
            } => {
                let value = Self::schedule_scale(base_scale, progression, i);
                let scale = match parameter {
                    ScheduledParameter::Scale => value,
                    ScheduledParameter::Rate => 1.0 / value,
                };
                match family {
                    ScheduleFamily::Gamma => scale * shape,
                    ScheduleFamily::Weibull => scale * gamma(1.0 + 1.0 / shape),
                }
            }
            DamageModel::DependentAdditive { theta0, theta, .. } => theta0 + theta,
        }
    }
}
