//! Direct numerical evaluation of expected cost rates when shocks arrive as a
//! Poisson process with rate `λ` and damages are exponential with rate `μ`.
//!
//! With `π_j(m)` the Poisson mass at `j` and `G^(j)(y) = P[Pois(μy) ≥ j]` the
//! Erlang CDF of the `j`-th damage sum, every quantity reduces to a Poisson
//! series nested inside a one-dimensional integral:
//!
//! * survival of the damage process to time `t` below a level `y`:
//!   `Σ_j π_j(λt) G^(j)(y)`, where `G^(0)(y)` is one for `y > 0` and zero
//!   otherwise, so a strength that has reached zero gives zero survival;
//! * the rate of crossing level `Z` at a shock while staying below `K(s)`:
//!   `λ (1 - exp(-μ(K(s) - Z))) Σ_j π_j(λs) q_j` with `q_j = π_j(μZ)`, which is
//!   the inner damage integral in closed form.
//!
//! Series stop once the remaining Poisson mass or the damage tail bound drops
//! below `series_tolerance`. Integrals over an infinite range stop at the
//! Erlang quantile beyond which the integrand carries negligible mass.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::scenario::{check_policy, Policy, Scenario};
use crate::special::{erlang_quantile, poisson_quantile, reg_lower_gamma};
use crate::stochastic::{erlang_cdf, DamageModel, Distribution};
use crate::strength::StrengthCurve;

/// Truncation and tolerance settings for the direct evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NumericsConfig {
    pub series_cap: u64,
    pub series_tolerance: f64,
    pub quadrature_abs_tol: f64,
    pub quadrature_rel_tol: f64,
    pub infinite_integral_horizon_quantile: f64,
    /// Terms summed past the truncation point, for convergence audits.
    pub audit_extra_terms: u64,
}

impl Default for NumericsConfig {
    fn default() -> Self {
        Self {
            series_cap: 10_000,
            series_tolerance: 1e-12,
            quadrature_abs_tol: 1e-10,
            quadrature_rel_tol: 1e-8,
            infinite_integral_horizon_quantile: 1.0 - 1e-10,
            audit_extra_terms: 0,
        }
    }
}

impl NumericsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("numerics.series_tolerance", self.series_tolerance),
            ("numerics.quadrature_abs_tol", self.quadrature_abs_tol),
            ("numerics.quadrature_rel_tol", self.quadrature_rel_tol),
        ];
        for (path, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(path, format!("must be positive, got {v}")));
            }
        }
        if self.series_cap == 0 {
            return Err(Error::validation("numerics.series_cap", "must be at least 1"));
        }
        let q = self.infinite_integral_horizon_quantile;
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::validation(
                "numerics.infinite_integral_horizon_quantile",
                format!("must lie in (0, 1), got {q}"),
            ));
        }
        Ok(())
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.quadrature_abs_tol,
            rel: self.quadrature_rel_tol,
            max_intervals: 2000,
        }
    }
}

/// Which replacement triggers a policy activates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Time(f64),
    Count(u64),
    Level(f64),
    Joint { t: f64, n: u64, z: f64 },
}

impl Mode {
    pub fn of(policy: &Policy) -> Result<Self> {
        match (policy.t, policy.n, policy.z) {
            (Some(t), None, None) => Ok(Mode::Time(t)),
            (None, Some(n), None) => Ok(Mode::Count(n)),
            (None, None, Some(z)) => Ok(Mode::Level(z)),
            (Some(t), Some(n), Some(z)) => Ok(Mode::Joint { t, n, z }),
            _ => Err(Error::Unsupported(format!(
                "direct evaluation covers T-only, N-only, Z-only and joint (T, N, Z) policies, got {policy}"
            ))),
        }
    }
}

/// Replacement probabilities by cause.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Probabilities {
    pub p_t: f64,
    pub p_n: f64,
    pub p_z: f64,
    pub p_k: f64,
}

impl Probabilities {
    pub fn sum(&self) -> f64 {
        self.p_t + self.p_n + self.p_z + self.p_k
    }
}

/// Cost rate with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectEvaluation {
    pub cost_rate: f64,
    pub probabilities: Probabilities,
    pub mean_t_r: f64,
}

/// Poisson masses `π_0(m), π_1(m), ...` by recurrence.
struct PoissonPmf {
    mean: f64,
    j: u64,
    value: f64,
    by_log: bool,
}

impl PoissonPmf {
    fn new(mean: f64) -> Self {
        // e^{-m} underflows for large means; fall back to log-space terms
        let by_log = mean > 600.0;
        let value = if mean <= 0.0 {
            1.0
        } else if by_log {
            crate::special::poisson_pmf(0, mean)
        } else {
            (-mean).exp()
        };
        Self {
            mean,
            j: 0,
            value,
            by_log,
        }
    }

    fn advance(&mut self) {
        self.j += 1;
        self.value = if self.mean <= 0.0 {
            0.0
        } else if self.by_log {
            crate::special::poisson_pmf(self.j, self.mean)
        } else {
            self.value * self.mean / self.j as f64
        };
    }
}

/// Stops a series once converged, optionally after a fixed number of extra terms.
struct Stopper {
    extra: u64,
    converged: bool,
}

impl Stopper {
    fn new(extra: u64) -> Self {
        Self {
            extra,
            converged: false,
        }
    }

    fn done(&mut self, converged_now: bool) -> bool {
        if !self.converged {
            self.converged = converged_now;
            return self.converged && self.extra == 0;
        }
        if self.extra == 0 {
            return true;
        }
        self.extra -= 1;
        self.extra == 0
    }
}

/// An exponential/exponential scenario reduced to its parameters.
#[derive(Debug, Clone, Copy)]
struct ExpExp<'a> {
    lambda: f64,
    mu: f64,
    curve: StrengthCurve,
    cfg: &'a NumericsConfig,
}

impl<'a> ExpExp<'a> {
    fn new(scenario: &Scenario, cfg: &'a NumericsConfig) -> Result<Self> {
        cfg.validate()?;
        let lambda = match scenario.inter_arrival {
            Distribution::Exponential { rate } => rate,
            other => {
                return Err(Error::Unsupported(format!(
                    "direct engine needs exponential inter-arrival times, got {other:?}"
                )))
            }
        };
        let mu = match scenario.damage {
            DamageModel::Iid {
                dist: Distribution::Exponential { rate },
            } => rate,
            other => {
                return Err(Error::Unsupported(format!(
                    "direct engine needs iid exponential damages, got {other:?}"
                )))
            }
        };
        Ok(Self {
            lambda,
            mu,
            curve: scenario.strength,
            cfg,
        })
    }

    fn cap(&self, limit: u64) -> u64 {
        limit.min(self.cfg.series_cap)
    }

    /// `Σ_{first <= j < limit} π_j(λt) G^(j)(y)`.
    fn survival(&self, t: f64, y: f64, first: u64, limit: u64) -> f64 {
        if !(y > 0.0) {
            return 0.0;
        }
        let tol = self.cfg.series_tolerance;
        let mut pi = PoissonPmf::new(self.lambda * t);
        let mut q = PoissonPmf::new(self.mu * y);
        let mut g = 1.0;
        let mut rem = 1.0;
        let mut sum = 0.0;
        let mut stop = Stopper::new(self.cfg.audit_extra_terms);
        for j in 0..self.cap(limit) {
            if j >= first {
                sum += pi.value * g;
            }
            rem -= pi.value;
            g = (g - q.value).max(0.0);
            pi.advance();
            q.advance();
            if stop.done(rem < tol || g < tol) {
                break;
            }
        }
        sum
    }

    /// `Σ_{j < limit} π_j(λs) π_j(μz)`: density of a first shock pushing damage past `z`,
    /// before the exponential overshoot factor.
    fn crossing_series(&self, s: f64, z: f64, limit: u64) -> f64 {
        let tol = self.cfg.series_tolerance;
        let mut pi = PoissonPmf::new(self.lambda * s);
        let mut q = PoissonPmf::new(self.mu * z);
        let mut rem_pi = 1.0;
        let mut rem_q = 1.0;
        let mut sum = 0.0;
        let mut stop = Stopper::new(self.cfg.audit_extra_terms);
        for _ in 0..self.cap(limit) {
            sum += pi.value * q.value;
            rem_pi -= pi.value;
            rem_q -= q.value;
            pi.advance();
            q.advance();
            if stop.done(rem_pi < tol || rem_q < tol) {
                break;
            }
        }
        sum
    }

    /// Time beyond which fewer than `min(limit, M)` shocks have arrived with
    /// negligible probability, `M` being a high quantile of the shock count
    /// needed to exceed `level`.
    fn horizon(&self, level: f64, limit: u64) -> f64 {
        let q = self.cfg.infinite_integral_horizon_quantile;
        let m = (1 + poisson_quantile(self.mu * level, q)).min(limit).max(1);
        erlang_quantile(m, self.lambda, q)
    }

    fn integrate(&self, f: impl Fn(f64) -> f64, a: f64, b: f64, breaks: &[f64]) -> f64 {
        integrate(f, a, b, breaks, self.cfg.tolerance()).value
    }

    fn zero_time(&self) -> f64 {
        self.curve.zero_time().unwrap_or(f64::INFINITY)
    }

    // ---- T only --------------------------------------------------------

    fn time_probability(&self, t: f64) -> f64 {
        self.survival(t, self.curve.at(t), 0, u64::MAX)
    }

    fn time_mean(&self, t: f64) -> f64 {
        let curve = self.curve;
        let end = t.min(self.zero_time());
        self.integrate(
            |u| self.survival(u, curve.at(u), 0, u64::MAX),
            0.0,
            end,
            &[],
        )
    }

    // ---- N only --------------------------------------------------------

    fn count_probability(&self, n: u64) -> f64 {
        let curve = self.curve;
        let end = self.horizon(curve.initial(), n).min(self.zero_time());
        let (lambda, mu) = (self.lambda, self.mu);
        let nf = n as f64;
        let mode = (nf - 1.0) / lambda;
        self.integrate(
            |s| {
                let k = curve.at(s);
                if k <= 0.0 {
                    return 0.0;
                }
                reg_lower_gamma(nf, mu * k) * lambda * crate::special::poisson_pmf(n - 1, lambda * s)
            },
            0.0,
            end,
            &[mode],
        )
    }

    fn count_mean(&self, n: u64) -> f64 {
        let curve = self.curve;
        let t_zero = self.zero_time();
        // the no-shock term integrates in closed form
        let first = -(-self.lambda * t_zero).exp_m1() / self.lambda;
        if n == 1 {
            return first;
        }
        let end = self.horizon(curve.initial(), n).min(t_zero);
        first
            + self.integrate(
                |u| self.survival(u, curve.at(u), 1, n),
                0.0,
                end,
                &[],
            )
    }

    // ---- Z only --------------------------------------------------------

    fn level_probability(&self, z: f64) -> Result<f64> {
        let t0 = self.curve.z_horizon(z)?;
        let end = t0.min(self.horizon(z, u64::MAX));
        let curve = self.curve;
        let (lambda, mu) = (self.lambda, self.mu);
        Ok(self.integrate(
            |s| {
                let gap = (curve.at(s) - z).max(0.0);
                -lambda * (-mu * gap).exp_m1() * self.crossing_series(s, z, u64::MAX)
            },
            0.0,
            end,
            &[],
        ))
    }

    fn level_mean(&self, z: f64) -> Result<f64> {
        let t0 = self.curve.z_horizon(z)?;
        let t_zero = self.zero_time();
        let end = self.horizon(z, u64::MAX).min(t_zero);
        let curve = self.curve;
        Ok(self.integrate(
            |u| self.survival(u, curve.modified_level(z, u), 0, u64::MAX),
            0.0,
            end,
            &[t0],
        ))
    }

    // ---- joint ---------------------------------------------------------

    fn joint_probabilities(&self, t: f64, n: u64, z: f64) -> Result<Probabilities> {
        let curve = self.curve;
        let (lambda, mu) = (self.lambda, self.mu);
        let p_t = self.survival(t, z, 0, n);
        let p_n = erlang_cdf(n, lambda, t) * reg_lower_gamma(n as f64, mu * z);
        // past this horizon the N-th shock or the level crossing has almost surely occurred
        let end = t.min(self.horizon(z, n));
        let p_z = self.integrate(
            |s| {
                let gap = (curve.at(s) - z).max(0.0);
                -lambda * (-mu * gap).exp_m1() * self.crossing_series(s, z, n)
            },
            0.0,
            end,
            &[],
        );
        let p_k = self.integrate(
            |s| {
                let gap = (curve.at(s) - z).max(0.0);
                lambda * (-mu * gap).exp() * self.crossing_series(s, z, n)
            },
            0.0,
            end,
            &[],
        );
        let p = Probabilities { p_t, p_n, p_z, p_k };
        let residual = 1.0 - p_t - p_n - p_z;
        if (p_k - residual).abs() > 1e-8 {
            return Err(Error::Numerical(format!(
                "replacement probabilities do not partition: p_K = {p_k} but 1 - p_T - p_N - p_Z = {residual}"
            )));
        }
        Ok(p)
    }

    fn joint_mean(&self, t: f64, n: u64, z: f64) -> f64 {
        let end = t.min(self.horizon(z, n));
        self.integrate(|u| self.survival(u, z, 0, n), 0.0, end, &[])
    }

    fn probabilities(&self, mode: Mode) -> Result<Probabilities> {
        Ok(match mode {
            Mode::Time(t) => {
                let p_t = self.time_probability(t);
                Probabilities {
                    p_t,
                    p_n: 0.0,
                    p_z: 0.0,
                    p_k: 1.0 - p_t,
                }
            }
            Mode::Count(n) => {
                let p_n = self.count_probability(n);
                Probabilities {
                    p_t: 0.0,
                    p_n,
                    p_z: 0.0,
                    p_k: 1.0 - p_n,
                }
            }
            Mode::Level(z) => {
                let p_z = self.level_probability(z)?;
                Probabilities {
                    p_t: 0.0,
                    p_n: 0.0,
                    p_z,
                    p_k: 1.0 - p_z,
                }
            }
            Mode::Joint { t, n, z } => self.joint_probabilities(t, n, z)?,
        })
    }

    fn mean(&self, mode: Mode) -> Result<f64> {
        Ok(match mode {
            Mode::Time(t) => self.time_mean(t),
            Mode::Count(n) => self.count_mean(n),
            Mode::Level(z) => self.level_mean(z)?,
            Mode::Joint { t, n, z } => self.joint_mean(t, n, z),
        })
    }
}

fn prepare<'a>(
    scenario: &Scenario,
    policy: &Policy,
    cfg: &'a NumericsConfig,
) -> Result<(ExpExp<'a>, Mode)> {
    let model = ExpExp::new(scenario, cfg)?;
    if let Some(z) = policy.z {
        let initial = scenario.strength.initial();
        if z > initial {
            return Err(Error::InvalidLevel { level: z, initial });
        }
    }
    check_policy(scenario, policy)?;
    Ok((model, Mode::of(policy)?))
}

/// Cost rate, cause probabilities and mean cycle length of `policy`.
pub fn evaluate(scenario: &Scenario, policy: &Policy, cfg: &NumericsConfig) -> Result<DirectEvaluation> {
    let (model, mode) = prepare(scenario, policy, cfg)?;
    let p = model.probabilities(mode)?;
    let mean_t_r = model.mean(mode)?;
    let c = &scenario.costs;
    let cost = c.c_t * p.p_t + c.c_n * p.p_n + c.c_z * p.p_z + c.c_k * p.p_k;
    Ok(DirectEvaluation {
        cost_rate: cost / mean_t_r,
        probabilities: p,
        mean_t_r,
    })
}

/// Expected cost rate of replacement at time `t` or at failure.
pub fn cost_rate_t(scenario: &Scenario, t: f64, cfg: &NumericsConfig) -> Result<f64> {
    Ok(evaluate(scenario, &Policy::time(t), cfg)?.cost_rate)
}

/// Expected cost rate of replacement at the `n`-th shock or at failure.
pub fn cost_rate_n(scenario: &Scenario, n: u64, cfg: &NumericsConfig) -> Result<f64> {
    Ok(evaluate(scenario, &Policy::count(n), cfg)?.cost_rate)
}

/// Expected cost rate of replacement at damage level `z` or at failure.
pub fn cost_rate_z(scenario: &Scenario, z: f64, cfg: &NumericsConfig) -> Result<f64> {
    Ok(evaluate(scenario, &Policy::level(z), cfg)?.cost_rate)
}

/// Expected cost rate of the joint `(T, N, Z)` policy.
pub fn cost_rate_tnz(scenario: &Scenario, policy: &Policy, cfg: &NumericsConfig) -> Result<f64> {
    if policy.t.is_none() || policy.n.is_none() || policy.z.is_none() {
        return Err(Error::validation("policy", "joint evaluation needs T, N and Z all active"));
    }
    Ok(evaluate(scenario, policy, cfg)?.cost_rate)
}

pub fn replacement_probabilities(
    scenario: &Scenario,
    policy: &Policy,
    cfg: &NumericsConfig,
) -> Result<Probabilities> {
    let (model, mode) = prepare(scenario, policy, cfg)?;
    model.probabilities(mode)
}

pub fn mean_time_to_replacement(scenario: &Scenario, policy: &Policy, cfg: &NumericsConfig) -> Result<f64> {
    let (model, mode) = prepare(scenario, policy, cfg)?;
    model.mean(mode)
}

/// Whether the direct engine can evaluate this scenario.
pub fn supports(scenario: &Scenario) -> bool {
    ExpExp::new(scenario, &NumericsConfig::default()).is_ok()
}
