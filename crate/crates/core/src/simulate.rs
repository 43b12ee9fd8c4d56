//! Monte Carlo simulation of replacement cycles.
//!
//! A lifetime is advanced shock by shock. Before each shock the simulator
//! checks whether the degrading strength falls to the accumulated damage, or
//! the planned time passes, before the next arrival; at each shock it checks
//! failure, the damage level `Z` and the shock count `N`, in that order. The
//! lifetime stops at the first event, so only the variates that matter are
//! drawn, always in the order `X_i` then `W_i`.
//!
//! Replications run in fixed-size chunks. Chunks may execute in parallel but
//! are combined in index order, which makes every estimate bit-identical for
//! any number of worker threads.

use std::collections::HashMap;
use std::io::Write;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::format_float;
use crate::scenario::{check_policy, CostVector, Policy, Scenario};
use crate::stochastic::RandomStream;

/// Maximum number of shocks in one simulated lifetime.
pub const SHOCK_CAP: u64 = 1_000_000;

const CHUNK: u64 = 1024;

/// Why a cycle ended. The discriminants are the published cause codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[repr(u8)]
pub enum Cause {
    Failure = 0,
    ShockCount = 1,
    PlannedTime = 2,
    DamageLevel = 3,
}

impl Cause {
    pub const ALL: [Cause; 4] = [
        Cause::Failure,
        Cause::ShockCount,
        Cause::PlannedTime,
        Cause::DamageLevel,
    ];

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn cost(self, costs: &CostVector) -> f64 {
        match self {
            Cause::Failure => costs.c_k,
            Cause::ShockCount => costs.c_n,
            Cause::PlannedTime => costs.c_t,
            Cause::DamageLevel => costs.c_z,
        }
    }
}

/// One simulated replacement cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LifetimeOutcome {
    pub t_r: f64,
    pub cause: Cause,
    pub shocks_seen: u64,
    pub final_damage: f64,
}

/// Simulate one cycle of `policy` on `stream`.
///
/// The policy must already satisfy [`validate_policy`](crate::scenario::validate_policy).
pub fn simulate_lifetime(
    scenario: &Scenario,
    policy: &Policy,
    stream: &mut RandomStream,
) -> Result<LifetimeOutcome> {
    let t_plan = policy.t_or_inf();
    let z = policy.z_or_inf();
    let n = policy.n.unwrap_or(u64::MAX);
    let t0 = match policy.z {
        Some(z) => scenario.strength.z_horizon(z)?,
        None => f64::INFINITY,
    };
    let curve = &scenario.strength;

    let mut s = 0.0;
    let mut l = 0.0;
    let mut shared = None;
    for i in 1..=SHOCK_CAP {
        let next = s + scenario.inter_arrival.sample(stream);
        let t_fail = curve
            .crossing_time(l)
            .map_or(f64::INFINITY, |t| t.max(s));
        let seen = i - 1;
        if t_plan < t_fail.min(next) {
            return Ok(LifetimeOutcome {
                t_r: t_plan,
                cause: Cause::PlannedTime,
                shocks_seen: seen,
                final_damage: l,
            });
        }
        if t_fail <= next {
            return Ok(LifetimeOutcome {
                t_r: t_fail,
                cause: Cause::Failure,
                shocks_seen: seen,
                final_damage: l,
            });
        }
        s = next;
        let (w, sh) = scenario.damage.damage_at(i, stream, shared)?;
        shared = sh;
        l += w;
        let strength = curve.at(s);
        let cause = if l >= strength {
            Some(Cause::Failure)
        } else if l >= z && s < t0 {
            Some(Cause::DamageLevel)
        } else if i >= n {
            Some(Cause::ShockCount)
        } else {
            None
        };
        if let Some(cause) = cause {
            return Ok(LifetimeOutcome {
                t_r: s,
                cause,
                shocks_seen: i,
                final_damage: l,
            });
        }
    }
    Err(Error::NonTerminating {
        replication: stream.replication_index(),
        shocks: SHOCK_CAP,
        time: s,
        damage: l,
    })
}

/// Sufficient statistics of a batch of replications.
///
/// Costs enter only through the cause counts, so one summary yields the
/// estimate for any cost vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OutcomeSummary {
    pub n_reps: u64,
    pub master_seed: u64,
    /// Replications per cause, indexed by cause code.
    pub counts: [u64; 4],
    /// Sum of `T_R` per cause, indexed by cause code.
    pub sum_t_by_cause: [f64; 4],
    pub sum_t_sq: f64,
}

impl OutcomeSummary {
    fn push(&mut self, o: &LifetimeOutcome) {
        let k = o.cause.code() as usize;
        self.n_reps += 1;
        self.counts[k] += 1;
        self.sum_t_by_cause[k] += o.t_r;
        self.sum_t_sq += o.t_r * o.t_r;
    }

    fn merge(&mut self, other: &OutcomeSummary) {
        self.n_reps += other.n_reps;
        for k in 0..4 {
            self.counts[k] += other.counts[k];
            self.sum_t_by_cause[k] += other.sum_t_by_cause[k];
        }
        self.sum_t_sq += other.sum_t_sq;
    }

    pub fn probability(&self, cause: Cause) -> f64 {
        self.counts[cause.code() as usize] as f64 / self.n_reps as f64
    }

    pub fn mean_t_r(&self) -> f64 {
        self.sum_t_by_cause.iter().sum::<f64>() / self.n_reps as f64
    }

    /// Ratio estimate of the cost rate under `costs`, with a delta-method standard error.
    pub fn estimate(&self, costs: &CostVector) -> CostRateEstimate {
        let n = self.n_reps as f64;
        let p = Cause::ALL.map(|c| self.probability(c));
        let cost = Cause::ALL.map(|c| c.cost(costs));
        let mean_cost: f64 = (0..4).map(|k| cost[k] * p[k]).sum();
        let mean_t = self.mean_t_r();
        let rate = mean_cost / mean_t;

        let std_error = if self.n_reps > 1 {
            let sum_t: f64 = self.sum_t_by_cause.iter().sum();
            let sum_c_sq: f64 = (0..4).map(|k| cost[k] * cost[k] * self.counts[k] as f64).sum();
            let sum_ct: f64 = (0..4).map(|k| cost[k] * self.sum_t_by_cause[k]).sum();
            let var_c = (sum_c_sq - n * mean_cost * mean_cost) / (n - 1.0);
            let var_t = (self.sum_t_sq - sum_t * mean_t) / (n - 1.0);
            let cov = (sum_ct - n * mean_cost * mean_t) / (n - 1.0);
            let var = (var_c - 2.0 * rate * cov + rate * rate * var_t) / (mean_t * mean_t * n);
            var.max(0.0).sqrt()
        } else {
            f64::NAN
        };

        CostRateEstimate {
            cost_rate: rate,
            p_t: p[Cause::PlannedTime as usize],
            p_n: p[Cause::ShockCount as usize],
            p_z: p[Cause::DamageLevel as usize],
            p_k: p[Cause::Failure as usize],
            counts: self.counts,
            mean_t_r: mean_t,
            std_error_cost_rate: std_error,
            n_reps: self.n_reps,
            master_seed: self.master_seed,
        }
    }
}

/// Monte Carlo estimate of the expected cost rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostRateEstimate {
    pub cost_rate: f64,
    pub p_t: f64,
    pub p_n: f64,
    pub p_z: f64,
    pub p_k: f64,
    /// Replications per cause, indexed by cause code.
    pub counts: [u64; 4],
    pub mean_t_r: f64,
    pub std_error_cost_rate: f64,
    pub n_reps: u64,
    pub master_seed: u64,
}

impl CostRateEstimate {
    /// Binomial standard error of a cause frequency.
    pub fn std_error_probability(&self, cause: Cause) -> f64 {
        let p = self.counts[cause.code() as usize] as f64 / self.n_reps as f64;
        (p * (1.0 - p) / self.n_reps as f64).sqrt()
    }
}

fn run_chunk(
    scenario: &Scenario,
    policy: &Policy,
    master_seed: u64,
    range: std::ops::Range<u64>,
) -> Result<OutcomeSummary> {
    let mut out = OutcomeSummary {
        master_seed,
        ..Default::default()
    };
    for r in range {
        let mut stream = RandomStream::new(master_seed, r);
        out.push(&simulate_lifetime(scenario, policy, &mut stream)?);
    }
    Ok(out)
}

/// Run replications `0..n_reps` and collect their sufficient statistics.
pub fn summarize(
    scenario: &Scenario,
    policy: &Policy,
    n_reps: u64,
    master_seed: u64,
) -> Result<OutcomeSummary> {
    if n_reps == 0 {
        return Err(Error::validation("n_reps", "must be at least 1"));
    }
    check_policy(scenario, policy)?;
    let chunks: Vec<Result<OutcomeSummary>> = (0..n_reps.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            run_chunk(scenario, policy, master_seed, lo..(lo + CHUNK).min(n_reps))
        })
        .collect();
    let mut total = OutcomeSummary {
        master_seed,
        ..Default::default()
    };
    for chunk in chunks {
        total.merge(&chunk?);
    }
    Ok(total)
}

/// Memo of per-policy summaries for one scenario, replication count and seed.
///
/// Summaries do not depend on costs, so one cache serves every cost vector,
/// as in sweeps over the failure cost.
#[derive(Debug)]
pub struct SummaryCache {
    scenario: Scenario,
    n_reps: u64,
    master_seed: u64,
    memo: Mutex<HashMap<(u64, u64, u64), OutcomeSummary>>,
}

impl SummaryCache {
    pub fn new(scenario: &Scenario, n_reps: u64, master_seed: u64) -> Self {
        Self {
            scenario: scenario.clone(),
            n_reps,
            master_seed,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn summary(&self, policy: &Policy) -> Result<OutcomeSummary> {
        let key = (
            policy.t.map_or(u64::MAX, f64::to_bits),
            policy.n.unwrap_or(u64::MAX),
            policy.z.map_or(u64::MAX, f64::to_bits),
        );
        if let Some(s) = self.memo.lock().expect("cache lock").get(&key) {
            return Ok(*s);
        }
        let s = summarize(&self.scenario, policy, self.n_reps, self.master_seed)?;
        self.memo.lock().expect("cache lock").insert(key, s);
        Ok(s)
    }

    pub fn estimate(&self, policy: &Policy, costs: &CostVector) -> Result<CostRateEstimate> {
        Ok(self.summary(policy)?.estimate(costs))
    }

    /// Number of distinct policies simulated so far.
    pub fn len(&self) -> usize {
        self.memo.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Estimate the expected cost rate of `policy` under the scenario's costs.
pub fn estimate_cost_rate(
    scenario: &Scenario,
    policy: &Policy,
    n_reps: u64,
    master_seed: u64,
) -> Result<CostRateEstimate> {
    Ok(summarize(scenario, policy, n_reps, master_seed)?.estimate(&scenario.costs))
}

/// Cause frequencies `(p_T, p_N, p_Z, p_K)`.
pub fn estimate_probabilities(
    scenario: &Scenario,
    policy: &Policy,
    n_reps: u64,
    master_seed: u64,
) -> Result<(f64, f64, f64, f64)> {
    let e = estimate_cost_rate(scenario, policy, n_reps, master_seed)?;
    Ok((e.p_t, e.p_n, e.p_z, e.p_k))
}

/// Every individual outcome, in replication order.
pub fn simulate_outcomes(
    scenario: &Scenario,
    policy: &Policy,
    n_reps: u64,
    master_seed: u64,
) -> Result<Vec<LifetimeOutcome>> {
    check_policy(scenario, policy)?;
    (0..n_reps)
        .into_par_iter()
        .map(|r| simulate_lifetime(scenario, policy, &mut RandomStream::new(master_seed, r)))
        .collect()
}

/// Write outcomes as CSV with header `replication,T_R,I_R,shocks_seen,final_damage`.
pub fn write_outcomes_csv<W: Write>(mut w: W, outcomes: &[LifetimeOutcome]) -> std::io::Result<()> {
    writeln!(w, "replication,T_R,I_R,shocks_seen,final_damage")?;
    for (r, o) in outcomes.iter().enumerate() {
        writeln!(
            w,
            "{r},{},{},{},{}",
            format_float(o.t_r),
            o.cause.code(),
            o.shocks_seen,
            format_float(o.final_damage)
        )?;
    }
    Ok(())
}
