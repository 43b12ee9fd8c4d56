//! Regeneration of the published tables and case studies.

use rayon::prelude::*;
use serde::Serialize;
use wearout_core::optimize::Method;
use wearout_core::{CostVector, Policy, Result};

use crate::config::{bundled_config, RunConfig};
use crate::engine::{
    evaluate, optimize, select_engine, sweep, Engine, EngineChoice, SimSettings, SweepRow, Variables,
};
use crate::output::{float, opt_float, policy_cells, Table};
use crate::reference::{self as r, JointRef, SingleRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    Table3,
    /// Independent, non-identically distributed damages.
    Tables46,
    /// Dependent damages.
    Tables56,
    Mailbox,
    Battery,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::Table1 => "table1",
            Target::Table2 => "table2",
            Target::Table3 => "table3",
            Target::Tables46 => "tables46",
            Target::Tables56 => "tables56",
            Target::Mailbox => "mailbox",
            Target::Battery => "battery",
        }
    }
}

/// How a computed cell is compared with its reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Rule {
    /// `|computed - reference| <= tol`
    Within(f64),
    /// `computed <= factor * reference`
    AtMost(f64),
    /// Reported side by side only.
    Report,
}

/// One computed cell next to its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub table: String,
    pub row: String,
    pub c_k: f64,
    pub engine: Engine,
    pub quantity: String,
    pub reference: f64,
    pub computed: f64,
    pub rule: Rule,
}

impl Check {
    pub fn passed(&self) -> Option<bool> {
        match self.rule {
            Rule::Within(tol) => Some((self.computed - self.reference).abs() <= tol + 1e-12),
            Rule::AtMost(f) => Some(self.computed <= f * self.reference),
            Rule::Report => None,
        }
    }
}

/// A qualitative statement checked on computed data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bundle {
    pub target: Target,
    pub checks: Vec<Check>,
    pub claims: Vec<Claim>,
    /// Additional named tables, such as sweep data.
    pub tables: Vec<(String, Table)>,
}

impl Bundle {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.passed() == Some(false)).count()
            + self.claims.iter().filter(|c| !c.holds).count()
    }

    pub fn checks_table(&self) -> Table {
        let mut t = Table::new(&[
            "table", "row", "c_K", "engine", "quantity", "reference", "computed", "rule", "limit", "pass",
        ]);
        for c in &self.checks {
            let (rule, limit) = match c.rule {
                Rule::Within(x) => ("within", float(x)),
                Rule::AtMost(x) => ("at_most_factor", float(x)),
                Rule::Report => ("report", String::new()),
            };
            t.push(vec![
                c.table.clone(),
                c.row.clone(),
                float(c.c_k),
                c.engine.name().into(),
                c.quantity.clone(),
                float(c.reference),
                float(c.computed),
                rule.into(),
                limit,
                c.passed().map(|p| p.to_string()).unwrap_or_default(),
            ]);
        }
        t
    }

    pub fn claims_table(&self) -> Table {
        let mut t = Table::new(&["claim", "holds", "detail"]);
        for c in &self.claims {
            t.push(vec![c.name.clone(), c.holds.to_string(), c.detail.clone()]);
        }
        t
    }
}

fn config_with(name: &str, costs: impl FnOnce(CostVector) -> CostVector) -> Result<RunConfig> {
    let mut cfg = bundled_config(name)?;
    let c = costs(cfg.scenario.costs);
    c.validate("costs")?;
    cfg.scenario = cfg.scenario.with_costs(c);
    Ok(cfg)
}

fn rule(tol: Option<f64>) -> Rule {
    tol.map_or(Rule::Report, Rule::Within)
}

/// Optimize `T`, `N` and `Z` separately for each row.
pub fn single_rows(table: &str, rows: &[SingleRef], sim: &SimSettings) -> Result<Vec<Check>> {
    let per_row: Vec<Result<Vec<Check>>> = rows
        .par_iter()
        .map(|row| {
            let cfg = config_with(row.scenario, |c| c.with_c_k(row.c_k))?;
            let tol = row.tolerances();
            let mut out = Vec::new();
            let mut check = |engine: Engine, quantity: &str, reference: f64, computed: f64, rule: Rule| {
                out.push(Check {
                    table: table.into(),
                    row: row.scenario.into(),
                    c_k: row.c_k,
                    engine,
                    quantity: quantity.into(),
                    reference,
                    computed,
                    rule,
                })
            };
            for (vars, name, value_ref, cost_ref, value_tol) in [
                (Variables::T, "T", row.t.0, row.t.1, tol.t),
                (Variables::N, "N", row.n.0 as f64, row.n.1, tol.n),
                (Variables::Z, "Z", row.z.0, row.z.1, tol.z),
            ] {
                let engine = select_engine(EngineChoice::Auto, &cfg.scenario, vars)?;
                let o = optimize(&cfg, vars, Method::Grid, engine, sim)?;
                let p = o.result.best_policy;
                let value = p.t.or(p.z).or(p.n.map(|n| n as f64)).expect("one active component");
                check(engine, name, value_ref, value, rule(value_tol));
                check(engine, &format!("C({name})"), cost_ref, o.check.cost_rate, Rule::Within(tol.cost));
            }
            Ok(out)
        })
        .collect();
    Ok(per_row.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

/// Optimize `(T, N, Z)` jointly for each row.
pub fn joint_rows(table: &str, rows: &[JointRef], sim: &SimSettings) -> Result<Vec<Check>> {
    let per_row: Vec<Result<Vec<Check>>> = rows
        .par_iter()
        .map(|row| {
            let [c_t, c_n, c_z, c_k] = row.costs;
            let cfg = config_with(row.scenario, |_| CostVector { c_t, c_n, c_z, c_k })?;
            let tol = row.tolerances();
            let engine = select_engine(EngineChoice::Auto, &cfg.scenario, Variables::TNZ)?;
            let o = optimize(&cfg, Variables::TNZ, Method::Grid, engine, sim)?;
            let p = o.result.best_policy;
            let cells = [
                ("T", row.t, p.t.unwrap_or(f64::NAN), rule(tol.t)),
                ("N", row.n as f64, p.n.map_or(f64::NAN, |n| n as f64), rule(tol.n)),
                ("Z", row.z, p.z.unwrap_or(f64::NAN), rule(tol.z)),
                ("C(T,N,Z)", row.cost, o.check.cost_rate, Rule::Within(tol.cost)),
            ];
            Ok(cells
                .into_iter()
                .map(|(q, reference, computed, rule)| Check {
                    table: table.into(),
                    row: row.scenario.into(),
                    c_k,
                    engine,
                    quantity: q.into(),
                    reference,
                    computed,
                    rule,
                })
                .collect())
        })
        .collect();
    Ok(per_row.into_iter().collect::<Result<Vec<_>>>()?.concat())
}

fn sweep_table(sweeps: &[(&str, Vec<SweepRow>)]) -> Table {
    let mut t = Table::new(&["variable", "c_K", "T", "N", "Z", "cost_rate", "evaluations"]);
    for (var, rows) in sweeps {
        for row in rows {
            let [pt, pn, pz] = policy_cells(&row.policy);
            t.push(vec![
                var.to_string(),
                float(row.c_k),
                pt,
                pn,
                pz,
                float(row.cost_rate),
                row.evaluations.to_string(),
            ]);
        }
    }
    t
}

/// Whether `values` never increase, with the first violation if any.
pub fn non_increasing(values: &[f64]) -> (bool, String) {
    match values.windows(2).position(|w| w[1] > w[0]) {
        Some(i) => (false, format!("rises from {} to {} at index {}", values[i], values[i + 1], i + 1)),
        None => (true, format!("{values:?}")),
    }
}

/// Whether `a[i] <= b[i]` for all `i`, with the first violation if any.
pub fn dominates(a: &[SweepRow], b: &[SweepRow]) -> (bool, String) {
    match a.iter().zip(b).find(|(x, y)| x.cost_rate > y.cost_rate) {
        Some((x, y)) => (false, format!("c_K = {}: {} > {}", x.c_k, x.cost_rate, y.cost_rate)),
        None => (true, String::new()),
    }
}

fn claim(name: &str, (holds, detail): (bool, String)) -> Claim {
    Claim {
        name: name.into(),
        holds,
        detail,
    }
}

fn case_study_check(row: &str, quantity: &str, reference: f64, computed: f64, rule: Rule) -> Check {
    Check {
        table: "case_study".into(),
        row: row.into(),
        c_k: 2.0,
        engine: Engine::Simulate,
        quantity: quantity.into(),
        reference,
        computed,
        rule,
    }
}

/// Mailbox: cost at the published optimum, joint optimization and the
/// single-variable sweeps over the failure cost.
pub fn mailbox(sim: &SimSettings) -> Result<Bundle> {
    let cfg = config_with("mailbox", |c| c.with_c_k(2.0))?;
    let (t, n, z) = r::MAILBOX_POLICY;
    let at_published = evaluate(&cfg, &Policy::joint(t, n, z), Engine::Simulate, sim)?;
    let joint = optimize(&cfg, Variables::TNZ, cfg.optimizer.method, Engine::Simulate, sim)?;
    let tol = r::CASE_STUDY_REL_TOL * r::MAILBOX_COST;
    let checks = vec![
        case_study_check("mailbox", "C(708.89,183,3.86)", r::MAILBOX_COST, at_published.cost_rate, Rule::Within(tol)),
        case_study_check("mailbox", "joint_search_value", at_published.cost_rate, joint.result.best_value, Rule::AtMost(1.05)),
        case_study_check("mailbox", "joint_optimum_reevaluated", at_published.cost_rate, joint.check.cost_rate, Rule::AtMost(1.05)),
    ];
    let sweeps = [("T", Variables::T), ("N", Variables::N), ("Z", Variables::Z)]
        .into_iter()
        .map(|(name, v)| Ok((name, sweep(&cfg, v, &r::SWEEP_C_K, Method::Grid, Engine::Simulate, sim)?)))
        .collect::<Result<Vec<_>>>()?;
    let ts: Vec<f64> = sweeps[0].1.iter().map(|r| r.policy.t.unwrap_or(f64::NAN)).collect();
    let claims = vec![
        claim("optimal T non-increasing in c_K", non_increasing(&ts)),
        claim("Z-policy cost <= T-policy cost", dominates(&sweeps[2].1, &sweeps[0].1)),
        claim("Z-policy cost <= N-policy cost", dominates(&sweeps[2].1, &sweeps[1].1)),
    ];
    Ok(Bundle {
        target: Target::Mailbox,
        checks,
        claims,
        tables: vec![
            ("mailbox_sweeps".into(), sweep_table(&sweeps)),
            ("mailbox_joint".into(), optimum_table(&joint)),
        ],
    })
}

/// Battery: cost at the published `(T, N)` optimum, `(T, N)` optimization and
/// the `T` and `N` sweeps.
pub fn battery(sim: &SimSettings) -> Result<Bundle> {
    let cfg = config_with("battery", |c| c.with_c_k(2.0))?;
    let (t, n) = r::BATTERY_POLICY;
    let at_published = evaluate(&cfg, &Policy::new(Some(t), Some(n), None), Engine::Simulate, sim)?;
    let joint = optimize(&cfg, Variables::TN, cfg.optimizer.method, Engine::Simulate, sim)?;
    let tol = r::CASE_STUDY_REL_TOL * r::BATTERY_COST;
    let checks = vec![
        case_study_check("battery", "C(73.41,28)", r::BATTERY_COST, at_published.cost_rate, Rule::Within(tol)),
        case_study_check("battery", "TN_search_value", at_published.cost_rate, joint.result.best_value, Rule::AtMost(1.05)),
        case_study_check("battery", "TN_optimum_reevaluated", at_published.cost_rate, joint.check.cost_rate, Rule::AtMost(1.05)),
    ];
    let sweeps = [("T", Variables::T), ("N", Variables::N)]
        .into_iter()
        .map(|(name, v)| Ok((name, sweep(&cfg, v, &r::SWEEP_C_K, Method::Grid, Engine::Simulate, sim)?)))
        .collect::<Result<Vec<_>>>()?;
    let claims = vec![claim("T-policy cost <= N-policy cost", dominates(&sweeps[0].1, &sweeps[1].1))];
    Ok(Bundle {
        target: Target::Battery,
        checks,
        claims,
        tables: vec![
            ("battery_sweeps".into(), sweep_table(&sweeps)),
            ("battery_joint".into(), optimum_table(&joint)),
        ],
    })
}

fn optimum_table(o: &crate::engine::Optimization) -> Table {
    let mut t = Table::new(&["T", "N", "Z", "search_value", "cost_rate", "std_error", "evaluations"]);
    let [pt, pn, pz] = policy_cells(&o.result.best_policy);
    t.push(vec![
        pt,
        pn,
        pz,
        float(o.result.best_value),
        float(o.check.cost_rate),
        opt_float(o.check.std_error),
        o.result.evaluations.to_string(),
    ]);
    t
}

pub fn reproduce(target: Target, sim: &SimSettings) -> Result<Bundle> {
    let tables = |checks| Bundle {
        target,
        checks,
        claims: Vec::new(),
        tables: Vec::new(),
    };
    match target {
        Target::Table1 => Ok(tables(single_rows("table1", r::TABLE1, sim)?)),
        Target::Table2 => Ok(tables(joint_rows("table2", r::TABLE2, sim)?)),
        Target::Table3 => Ok(tables(joint_rows("table3", r::TABLE3, sim)?)),
        Target::Tables46 => Ok(tables(
            [
                single_rows("schedule_single", r::SCHEDULE_SINGLE, sim)?,
                joint_rows("schedule_joint", r::SCHEDULE_JOINT, sim)?,
            ]
            .concat(),
        )),
        Target::Tables56 => Ok(tables(
            [
                single_rows("dependent_single", r::DEPENDENT_SINGLE, sim)?,
                joint_rows("dependent_joint", r::DEPENDENT_JOINT, sim)?,
            ]
            .concat(),
        )),
        Target::Mailbox => mailbox(sim),
        Target::Battery => battery(sim),
    }
}
