//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use wearout_core::optimize::{write_trace_csv, Method};
use wearout_core::simulate::{simulate_outcomes, write_outcomes_csv};
use wearout_core::Policy;

use crate::config::{load_run_config, RunConfig};
use crate::engine::{evaluate, optimize, select_engine, sweep, EngineChoice, SimSettings, Variables};
use crate::error::{CliError, CliResult};
use crate::output::{float, opt_float, policy_cells, write_table, RunManifest, Table};
use crate::reproduce::{reproduce, Target};

#[derive(Debug, Parser)]
#[command(name = "wearout", version, about = "Replacement policies for units under cumulative shock damage")]
pub struct Cli {
    /// Master seed of all random streams.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Replications for reported simulation estimates.
    #[arg(long, global = true)]
    pub reps: Option<u64>,
    /// Replications per candidate during simulation-based searches.
    #[arg(long, global = true)]
    pub search_reps: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = EngineChoice::Auto)]
    pub engine: EngineChoice,
    /// Output directory for CSV files and manifests.
    #[arg(long, global = true, default_value = "wearout-out")]
    pub out: PathBuf,
    /// JSON config: a scenario and/or `optimizer` and `numerics` blocks.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(flatten)]
    pub numerics: NumericsArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Overrides for the direct evaluator's numerics.
#[derive(Debug, Args)]
pub struct NumericsArgs {
    #[arg(long, global = true)]
    pub series_cap: Option<u64>,
    #[arg(long, global = true)]
    pub series_tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub quad_abs_tol: Option<f64>,
    #[arg(long, global = true)]
    pub quad_rel_tol: Option<f64>,
    #[arg(long, global = true)]
    pub horizon_quantile: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PolicyArgs {
    /// Planned replacement time.
    #[arg(long = "T")]
    pub t: Option<f64>,
    /// Replacement shock count.
    #[arg(long = "N")]
    pub n: Option<u64>,
    /// Replacement damage level.
    #[arg(long = "Z")]
    pub z: Option<f64>,
}

impl PolicyArgs {
    fn policy(&self) -> Policy {
        Policy::new(self.t, self.n, self.z)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Grid,
    Anneal,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Grid => Method::Grid,
            MethodArg::Anneal => Method::Anneal,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cost rate, cause probabilities and mean cycle length of one policy.
    Evaluate {
        /// Scenario file or bundled scenario name.
        scenario: Option<String>,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Override the failure cost.
        #[arg(long)]
        c_k: Option<f64>,
    },
    /// Minimize the cost rate over a subset of T, N, Z.
    Optimize {
        scenario: Option<String>,
        /// Variables to optimize, e.g. `TNZ`, `TN`, `Z`.
        #[arg(long, default_value = "TNZ")]
        vars: String,
        /// Search method (default: from config, else grid).
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
        #[arg(long)]
        c_k: Option<f64>,
    },
    /// Optimal single variable and minimal cost rate for each failure cost.
    Sweep {
        scenario: Option<String>,
        /// `T`, `N` or `Z`.
        #[arg(long)]
        var: String,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5,6,7,8,9,10")]
        c_k: Vec<f64>,
        #[arg(long, value_enum)]
        method: Option<MethodArg>,
    },
    /// Regenerate a published table or case study side by side with the published values.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
    },
    /// Write every simulated cycle of one policy.
    SimulateDump {
        scenario: Option<String>,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(long)]
        c_k: Option<f64>,
    },
}

fn apply_numerics(cfg: &mut RunConfig, a: &NumericsArgs) -> CliResult<()> {
    let n = &mut cfg.numerics;
    if let Some(v) = a.series_cap {
        n.series_cap = v;
    }
    if let Some(v) = a.series_tolerance {
        n.series_tolerance = v;
    }
    if let Some(v) = a.quad_abs_tol {
        n.quadrature_abs_tol = v;
    }
    if let Some(v) = a.quad_rel_tol {
        n.quadrature_rel_tol = v;
    }
    if let Some(v) = a.horizon_quantile {
        n.infinite_integral_horizon_quantile = v;
    }
    Ok(n.validate()?)
}

fn apply_c_k(cfg: &mut RunConfig, c_k: Option<f64>) -> CliResult<()> {
    if let Some(c) = c_k {
        let costs = cfg.scenario.costs.with_c_k(c);
        costs.validate("c_K")?;
        cfg.scenario = cfg.scenario.with_costs(costs);
    }
    Ok(())
}

fn sim_settings(cli: &Cli, cfg: Option<&RunConfig>) -> CliResult<SimSettings> {
    let d = SimSettings::default();
    let s = SimSettings {
        reps: cli.reps.unwrap_or(d.reps),
        search_reps: cli.search_reps.or(cfg.map(|c| c.optimizer.reps)).unwrap_or(d.search_reps),
        seed: cli.seed,
    };
    if s.reps == 0 || s.search_reps == 0 {
        return Err(CliError::Usage("replication counts must be at least 1".into()));
    }
    Ok(s)
}

struct Ctx<'a> {
    cli: &'a Cli,
    cfg: RunConfig,
    sim: SimSettings,
}

impl Ctx<'_> {
    fn load<'c>(cli: &'c Cli, scenario: Option<&str>, c_k: Option<f64>) -> CliResult<Ctx<'c>> {
        let mut cfg = load_run_config(scenario, cli.config.as_deref())?;
        apply_numerics(&mut cfg, &cli.numerics)?;
        apply_c_k(&mut cfg, c_k)?;
        let sim = sim_settings(cli, Some(&cfg))?;
        Ok(Ctx { cli, cfg, sim })
    }

    fn manifest(&self, command: &str, options: &str) -> RunManifest {
        let opts = format!(
            "{command} {options} reps={} search_reps={} engine={:?}",
            self.sim.reps, self.sim.search_reps, self.cli.engine
        );
        RunManifest::new(command, self.cfg.scenario.label.clone(), self.cfg.hash(&opts), self.sim.seed)
    }

    fn write(&self, name: &str, table: &Table, manifest: &RunManifest) -> CliResult<()> {
        let path = write_table(&self.cli.out, name, table, manifest)?;
        println!("wrote {}", path.display());
        Ok(())
    }
}

fn cmd_evaluate(cli: &Cli, scenario: Option<&str>, policy: Policy, c_k: Option<f64>) -> CliResult<()> {
    let ctx = Ctx::load(cli, scenario, c_k)?;
    wearout_core::scenario::check_policy(&ctx.cfg.scenario, &policy)?;
    let engine = select_engine(cli.engine, &ctx.cfg.scenario, Variables::of(&policy))?;
    let e = evaluate(&ctx.cfg, &policy, engine, &ctx.sim)?;

    println!("scenario   {}", ctx.cfg.scenario.label);
    println!("policy     {policy}");
    println!("engine     {}", engine.name());
    match e.std_error {
        Some(se) => println!("cost rate  {:.6e} (se {:.2e}, {} reps)", e.cost_rate, se, e.n_reps.unwrap_or(0)),
        None => println!("cost rate  {:.6e}", e.cost_rate),
    }
    println!("P[T] {:.6}  P[N] {:.6}  P[Z] {:.6}  P[K] {:.6}", e.p_t, e.p_n, e.p_z, e.p_k);
    println!("mean T_R   {:.6}", e.mean_t_r);

    let c = ctx.cfg.scenario.costs;
    let mut t = Table::new(&[
        "engine", "T", "N", "Z", "c_T", "c_N", "c_Z", "c_K", "cost_rate", "p_T", "p_N", "p_Z", "p_K", "mean_T_R",
        "std_error", "n_reps",
    ]);
    let [pt, pn, pz] = policy_cells(&policy);
    t.push(vec![
        engine.name().into(),
        pt,
        pn,
        pz,
        float(c.c_t),
        float(c.c_n),
        float(c.c_z),
        float(c.c_k),
        float(e.cost_rate),
        float(e.p_t),
        float(e.p_n),
        float(e.p_z),
        float(e.p_k),
        float(e.mean_t_r),
        opt_float(e.std_error),
        e.n_reps.map(|n| n.to_string()).unwrap_or_default(),
    ]);
    ctx.write("evaluate", &t, &ctx.manifest("evaluate", &policy.to_string()))
}

fn cmd_optimize(
    cli: &Cli,
    scenario: Option<&str>,
    vars: &str,
    method: Option<MethodArg>,
    c_k: Option<f64>,
) -> CliResult<()> {
    let vars = Variables::parse(vars)?;
    let ctx = Ctx::load(cli, scenario, c_k)?;
    let method = method.map(Method::from).unwrap_or(ctx.cfg.optimizer.method);
    let engine = select_engine(cli.engine, &ctx.cfg.scenario, vars)?;
    let o = optimize(&ctx.cfg, vars, method, engine, &ctx.sim)?;
    let r = &o.result;

    println!("scenario   {}", ctx.cfg.scenario.label);
    println!("variables  {}  method {:?}  engine {}", vars.label(), method, engine.name());
    println!("optimum    {}", r.best_policy);
    println!("value      {:.6e} ({} evaluations)", r.best_value, r.evaluations);
    if let Some(se) = o.check.std_error {
        println!("check      {:.6e} (se {:.2e}, {} reps)", o.check.cost_rate, se, ctx.sim.reps);
    }

    let mut t = Table::new(&[
        "variables", "method", "engine", "T", "N", "Z", "best_value", "cost_rate", "std_error", "evaluations", "seed",
    ]);
    let [pt, pn, pz] = policy_cells(&r.best_policy);
    t.push(vec![
        vars.label(),
        format!("{method:?}").to_lowercase(),
        engine.name().into(),
        pt,
        pn,
        pz,
        float(r.best_value),
        float(o.check.cost_rate),
        opt_float(o.check.std_error),
        r.evaluations.to_string(),
        r.seed.to_string(),
    ]);
    let options = format!("vars={} method={method:?}", vars.label());
    let manifest = ctx.manifest("optimize", &options);
    ctx.write("optimize", &t, &manifest)?;

    let mut trace = Vec::new();
    write_trace_csv(&mut trace, r).expect("in-memory write");
    let path = cli.out.join("optimize_trace.csv");
    std::fs::write(&path, trace).map_err(|source| CliError::Output { path: path.clone(), source })?;
    println!("wrote {}", path.display());
    Ok(())
}

fn cmd_sweep(
    cli: &Cli,
    scenario: Option<&str>,
    var: &str,
    c_ks: &[f64],
    method: Option<MethodArg>,
) -> CliResult<()> {
    let vars = Variables::parse(var)?;
    if vars.label().len() != 1 {
        return Err(CliError::Usage("sweep takes exactly one of T, N, Z".into()));
    }
    let ctx = Ctx::load(cli, scenario, None)?;
    let method = method.map(Method::from).unwrap_or(ctx.cfg.optimizer.method);
    let engine = select_engine(cli.engine, &ctx.cfg.scenario, vars)?;
    let rows = sweep(&ctx.cfg, vars, c_ks, method, engine, &ctx.sim)?;

    let mut t = Table::new(&["c_K", "T", "N", "Z", "cost_rate", "evaluations"]);
    println!("{:>6}  {:>14}  {:>12}", "c_K", vars.label(), "cost rate");
    for r in &rows {
        let [pt, pn, pz] = policy_cells(&r.policy);
        let value = [&pt, &pn, &pz].into_iter().find(|s| !s.is_empty()).cloned().unwrap_or_default();
        let shown: f64 = value.parse().unwrap_or(f64::NAN);
        println!("{:>6}  {:>14.6}  {:>12.6e}", r.c_k, shown, r.cost_rate);
        t.push(vec![float(r.c_k), pt, pn, pz, float(r.cost_rate), r.evaluations.to_string()]);
    }
    let list: Vec<String> = c_ks.iter().map(|c| c.to_string()).collect();
    let options = format!("var={} c_K={} method={method:?}", vars.label(), list.join(","));
    ctx.write(&format!("sweep_{}", vars.label()), &t, &ctx.manifest("sweep", &options))
}

fn cmd_reproduce(cli: &Cli, target: Target) -> CliResult<()> {
    let sim = sim_settings(cli, None)?;
    let bundle = reproduce(target, &sim)?;
    let hash = {
        use sha2::{Digest, Sha256};
        let opts = format!("reproduce {} reps={} search_reps={}", target.name(), sim.reps, sim.search_reps);
        format!("{:x}", Sha256::digest(opts.as_bytes()))
    };
    let manifest = RunManifest::new(format!("reproduce {}", target.name()), target.name(), hash, sim.seed);
    let out: &Path = &cli.out;

    for c in &bundle.checks {
        let flag = match c.passed() {
            Some(true) => "ok",
            Some(false) => "MISS",
            None => "",
        };
        println!(
            "{:<16} {:<28} c_K={:<4} {:<22} ref {:>12.6} got {:>12.6} {}",
            c.table, c.row, c.c_k, c.quantity, c.reference, c.computed, flag
        );
    }
    for c in &bundle.claims {
        println!("{:<48} {}", c.name, if c.holds { "holds" } else { "FAILS" });
    }
    let name = format!("reproduce_{}", target.name());
    println!("wrote {}", write_table(out, &name, &bundle.checks_table(), &manifest)?.display());
    if !bundle.claims.is_empty() {
        let path = write_table(out, &format!("{name}_claims"), &bundle.claims_table(), &manifest)?;
        println!("wrote {}", path.display());
    }
    for (n, t) in &bundle.tables {
        println!("wrote {}", write_table(out, n, t, &manifest)?.display());
    }
    println!("{} cell(s) outside tolerance", bundle.failures());
    Ok(())
}

fn cmd_simulate_dump(cli: &Cli, scenario: Option<&str>, policy: Policy, c_k: Option<f64>) -> CliResult<()> {
    let ctx = Ctx::load(cli, scenario, c_k)?;
    let outcomes = simulate_outcomes(&ctx.cfg.scenario, &policy, ctx.sim.reps, ctx.sim.seed)?;
    let mut buf = Vec::new();
    write_outcomes_csv(&mut buf, &outcomes).expect("in-memory write");
    std::fs::create_dir_all(&cli.out).map_err(|source| CliError::Output {
        path: cli.out.clone(),
        source,
    })?;
    let path = cli.out.join("simulate_dump.csv");
    std::fs::write(&path, buf).map_err(|source| CliError::Output { path: path.clone(), source })?;
    let manifest = ctx.manifest("simulate-dump", &policy.to_string());
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    let mpath = cli.out.join("simulate_dump.manifest.json");
    std::fs::write(&mpath, json).map_err(|source| CliError::Output { path: mpath, source })?;
    println!("wrote {} ({} cycles)", path.display(), outcomes.len());
    Ok(())
}

fn dispatch(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Evaluate { scenario, policy, c_k } => cmd_evaluate(cli, scenario.as_deref(), policy.policy(), *c_k),
        Command::Optimize {
            scenario,
            vars,
            method,
            c_k,
        } => cmd_optimize(cli, scenario.as_deref(), vars, *method, *c_k),
        Command::Sweep {
            scenario,
            var,
            c_k,
            method,
        } => cmd_sweep(cli, scenario.as_deref(), var, c_k, *method),
        Command::Reproduce { target } => cmd_reproduce(cli, *target),
        Command::SimulateDump { scenario, policy, c_k } => {
            cmd_simulate_dump(cli, scenario.as_deref(), policy.policy(), *c_k)
        }
    }
}

/// Run a parsed command line, on a dedicated thread pool when `--threads` is set.
pub fn run(cli: &Cli) -> CliResult<()> {
    match cli.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))?;
            pool.install(|| dispatch(cli))
        }
        None => dispatch(cli),
    }
}
