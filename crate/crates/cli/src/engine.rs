//! Engine selection and the evaluate / optimize / sweep operations shared
//! by the commands and the reproduction runners.

use serde::Serialize;
use wearout_core::direct;
use wearout_core::optimize::{
    direct_objective, grid_search, simulated_annealing, Method, OptimResult, SearchSpace,
};
use wearout_core::simulate::{summarize, SummaryCache};
use wearout_core::{Error, Policy, Result, Scenario};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum EngineChoice {
    /// Direct when the scenario and policy allow it, simulation otherwise.
    #[default]
    Auto,
    Direct,
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    Direct,
    Simulate,
}

impl Engine {
    pub fn name(self) -> &'static str {
        match self {
            Engine::Direct => "direct",
            Engine::Simulate => "simulate",
        }
    }
}

/// Monte Carlo settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimSettings {
    /// Replications for a reported estimate.
    pub reps: u64,
    /// Replications per candidate during a search.
    pub search_reps: u64,
    pub seed: u64,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            reps: 100_000,
            search_reps: 10_000,
            seed: 1,
        }
    }
}

/// Active policy components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Variables {
    pub t: bool,
    pub n: bool,
    pub z: bool,
}

impl Variables {
    pub const T: Self = Self::new(true, false, false);
    pub const N: Self = Self::new(false, true, false);
    pub const Z: Self = Self::new(false, false, true);
    pub const TN: Self = Self::new(true, true, false);
    pub const TNZ: Self = Self::new(true, true, true);

    pub const fn new(t: bool, n: bool, z: bool) -> Self {
        Self { t, n, z }
    }

    /// Parse a subset of `TNZ` such as `"TN"`; the empty set is rejected.
    pub fn parse(text: &str) -> Result<Self> {
        let mut v = Self::new(false, false, false);
        for c in text.chars() {
            match c.to_ascii_uppercase() {
                'T' => v.t = true,
                'N' => v.n = true,
                'Z' => v.z = true,
                ',' | ' ' => {}
                other => {
                    return Err(Error::Validation {
                        path: "variables".into(),
                        message: format!("unknown variable `{other}`; use a subset of T, N, Z"),
                    })
                }
            }
        }
        if !(v.t || v.n || v.z) {
            return Err(Error::Validation {
                path: "variables".into(),
                message: "at least one of T, N, Z must be selected".into(),
            });
        }
        Ok(v)
    }

    pub fn of(policy: &Policy) -> Self {
        Self::new(policy.t.is_some(), policy.n.is_some(), policy.z.is_some())
    }

    pub fn label(self) -> String {
        [(self.t, 'T'), (self.n, 'N'), (self.z, 'Z')]
            .iter()
            .filter(|(on, _)| *on)
            .map(|(_, c)| *c)
            .collect()
    }

    fn count(self) -> usize {
        self.t as usize + self.n as usize + self.z as usize
    }

    /// The direct evaluator handles one variable alone or all three together.
    fn direct_mode(self) -> bool {
        matches!(self.count(), 1 | 3)
    }
}

/// Resolve the engine for a scenario and set of active variables.
pub fn select_engine(choice: EngineChoice, scenario: &Scenario, vars: Variables) -> Result<Engine> {
    let exp_exp = direct::supports(scenario);
    let possible = exp_exp && vars.direct_mode();
    match choice {
        EngineChoice::Simulate => Ok(Engine::Simulate),
        EngineChoice::Auto if possible => Ok(Engine::Direct),
        EngineChoice::Auto => Ok(Engine::Simulate),
        EngineChoice::Direct if possible => Ok(Engine::Direct),
        EngineChoice::Direct if !exp_exp => Err(Error::Unsupported(
            "the direct engine needs exponential inter-arrival times and iid exponential damage".into(),
        )),
        EngineChoice::Direct => Err(Error::Unsupported(format!(
            "the direct engine evaluates T, N or Z alone or all three jointly, not {}",
            vars.label()
        ))),
    }
}

/// Cost rate of one policy with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub engine: Engine,
    pub policy: Policy,
    pub cost_rate: f64,
    pub p_t: f64,
    pub p_n: f64,
    pub p_z: f64,
    pub p_k: f64,
    pub mean_t_r: f64,
    /// Standard error of the cost rate (simulation only).
    pub std_error: Option<f64>,
    /// Replications (simulation only).
    pub n_reps: Option<u64>,
}

pub fn evaluate(cfg: &RunConfig, policy: &Policy, engine: Engine, sim: &SimSettings) -> Result<Evaluation> {
    match engine {
        Engine::Direct => {
            let e = direct::evaluate(&cfg.scenario, policy, &cfg.numerics)?;
            let p = e.probabilities;
            Ok(Evaluation {
                engine,
                policy: *policy,
                cost_rate: e.cost_rate,
                p_t: p.p_t,
                p_n: p.p_n,
                p_z: p.p_z,
                p_k: p.p_k,
                mean_t_r: e.mean_t_r,
                std_error: None,
                n_reps: None,
            })
        }
        Engine::Simulate => {
            let e = summarize(&cfg.scenario, policy, sim.reps, sim.seed)?.estimate(&cfg.scenario.costs);
            Ok(Evaluation {
                engine,
                policy: *policy,
                cost_rate: e.cost_rate,
                p_t: e.p_t,
                p_n: e.p_n,
                p_z: e.p_z,
                p_k: e.p_k,
                mean_t_r: e.mean_t_r,
                std_error: Some(e.std_error_cost_rate),
                n_reps: Some(e.n_reps),
            })
        }
    }
}

/// Default bounds for the active axes, overridden by the config's bounds.
pub fn search_space(cfg: &RunConfig, vars: Variables) -> Result<SearchSpace> {
    let d = SearchSpace::default_for(&cfg.scenario, vars.t, vars.n, vars.z)?;
    let b = &cfg.optimizer.bounds;
    SearchSpace::new(
        cfg.scenario.strength,
        d.t.map(|x| b.t.unwrap_or(x)),
        d.n.map(|x| b.n.unwrap_or(x)),
        d.z.map(|x| b.z.unwrap_or(x)),
    )
}

fn run_method<F>(objective: F, space: &SearchSpace, cfg: &RunConfig, method: Method, seed: u64) -> Result<OptimResult>
where
    F: Fn(&Policy) -> Result<f64> + Sync,
{
    match method {
        Method::Grid => grid_search(objective, space, &cfg.optimizer.grid),
        Method::Anneal => simulated_annealing(objective, space, &cfg.optimizer.anneal, seed),
    }
}

/// A search result together with a fresh evaluation of its best policy.
#[derive(Debug, Clone, PartialEq)]
pub struct Optimization {
    pub engine: Engine,
    pub result: OptimResult,
    /// The best policy re-evaluated with `reps` replications (simulation) or
    /// exactly (direct).
    pub check: Evaluation,
}

pub fn optimize(
    cfg: &RunConfig,
    vars: Variables,
    method: Method,
    engine: Engine,
    sim: &SimSettings,
) -> Result<Optimization> {
    let space = search_space(cfg, vars)?;
    let result = match engine {
        Engine::Direct => run_method(direct_objective(&cfg.scenario, &cfg.numerics), &space, cfg, method, sim.seed)?,
        Engine::Simulate => {
            let cache = SummaryCache::new(&cfg.scenario, sim.search_reps, sim.seed);
            let costs = cfg.scenario.costs;
            let objective = |p: &Policy| Ok(cache.estimate(p, &costs)?.cost_rate);
            run_method(objective, &space, cfg, method, sim.seed)?
        }
    };
    let check = evaluate(cfg, &result.best_policy, engine, sim)?;
    Ok(Optimization { engine, result, check })
}

/// Optimum of one sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub c_k: f64,
    pub policy: Policy,
    pub cost_rate: f64,
    pub evaluations: usize,
}

/// Optimize `vars` at each failure cost in `c_ks`, other costs unchanged.
///
/// With the simulation engine all sweep points share one cache of outcome
/// summaries, so each policy is simulated once whatever the number of costs.
pub fn sweep(
    cfg: &RunConfig,
    vars: Variables,
    c_ks: &[f64],
    method: Method,
    engine: Engine,
    sim: &SimSettings,
) -> Result<Vec<SweepRow>> {
    let configs: Vec<RunConfig> = c_ks
        .iter()
        .map(|&c| {
            let costs = cfg.scenario.costs.with_c_k(c);
            costs.validate("c_K")?;
            Ok(RunConfig {
                scenario: cfg.scenario.with_costs(costs),
                ..cfg.clone()
            })
        })
        .collect::<Result<_>>()?;
    let space = search_space(cfg, vars)?;
    let cache = SummaryCache::new(&cfg.scenario, sim.search_reps, sim.seed);
    configs
        .iter()
        .map(|c| {
            let r = match engine {
                Engine::Direct => run_method(direct_objective(&c.scenario, &c.numerics), &space, c, method, sim.seed)?,
                Engine::Simulate => {
                    let costs = c.scenario.costs;
                    let objective = |p: &Policy| Ok(cache.estimate(p, &costs)?.cost_rate);
                    run_method(objective, &space, c, method, sim.seed)?
                }
            };
            Ok(SweepRow {
                c_k: c.scenario.costs.c_k,
                policy: r.best_policy,
                cost_rate: r.best_value,
                evaluations: r.evaluations,
            })
        })
        .collect()
}
