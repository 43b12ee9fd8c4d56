//! Policy optimization by coarse-to-fine grid search and simulated annealing.
//!
//! Objectives are plain functions from a policy to a cost rate. Simulation
//! objectives reuse one master seed for every candidate, so they are
//! deterministic and both optimizers are reproducible.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::direct::{self, NumericsConfig};
use crate::error::{Error, Result};
use crate::format_float;
use crate::scenario::{Policy, Scenario};
use crate::simulate;
use crate::stochastic::{standard_normal_quantile, RandomStream};
use crate::strength::StrengthCurve;

/// Stream index reserved for the annealer's own proposals.
const ANNEAL_STREAM: u64 = 1 << 62;

/// Box bounds on the active policy components plus the strength curve that
/// couples `T` and `Z`. An inactive axis is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSpace {
    pub t: Option<(f64, f64)>,
    pub n: Option<(u64, u64)>,
    pub z: Option<(f64, f64)>,
    pub strength: StrengthCurve,
}

impl SearchSpace {
    pub fn new(
        strength: StrengthCurve,
        t: Option<(f64, f64)>,
        n: Option<(u64, u64)>,
        z: Option<(f64, f64)>,
    ) -> Result<Self> {
        let space = Self { t, n, z, strength };
        space.validate()?;
        Ok(space)
    }

    /// Default bounds for the selected axes: `T` in `[0.1, 50]` mean
    /// inter-arrival times, `N` in `[1, 200]`, `Z` in `[0.01, 1]` times `K(0)`.
    pub fn default_for(scenario: &Scenario, t: bool, n: bool, z: bool) -> Result<Self> {
        let mu_f = scenario.mu_f();
        let k0 = scenario.strength.initial();
        Self::new(
            scenario.strength,
            t.then_some((0.1 * mu_f, 50.0 * mu_f)),
            n.then_some((1, 200)),
            z.then_some((0.01 * k0, k0)),
        )
    }

    fn validate(&self) -> Result<()> {
        if self.t.is_none() && self.n.is_none() && self.z.is_none() {
            return Err(Error::validation("space", "at least one of T, N, Z must be optimized"));
        }
        if let Some((lo, hi)) = self.t {
            if !(lo > 0.0 && lo < hi && hi.is_finite()) {
                return Err(Error::validation("space.T", format!("need 0 < low < high, got [{lo}, {hi}]")));
            }
        }
        if let Some((lo, hi)) = self.n {
            if !(lo >= 1 && lo < hi) {
                return Err(Error::validation("space.N", format!("need 1 <= low < high, got [{lo}, {hi}]")));
            }
        }
        if let Some((lo, hi)) = self.z {
            if !(lo > 0.0 && lo < hi) {
                return Err(Error::validation("space.Z", format!("need 0 < low < high, got [{lo}, {hi}]")));
            }
            let k0 = self.strength.initial();
            if hi > k0 {
                return Err(Error::validation(
                    "space.Z",
                    format!("upper bound {hi} exceeds the initial strength {k0}"),
                ));
            }
        }
        Ok(())
    }

    /// Within bounds and, when both are active, `Z <= K(T)`.
    pub fn is_feasible(&self, p: &Policy) -> bool {
        fn inside<T: PartialOrd>(v: Option<T>, b: Option<(T, T)>) -> bool {
            match (v, b) {
                (Some(v), Some((lo, hi))) => v >= lo && v <= hi,
                (None, None) => true,
                _ => false,
            }
        }
        if !(inside(p.t, self.t) && inside(p.n, self.n) && inside(p.z, self.z)) {
            return false;
        }
        match (p.t, p.z) {
            (Some(t), Some(z)) => z <= self.strength.at(t),
            _ => true,
        }
    }

    /// Clamp into the bounds, then move an infeasible `(T, Z)` pair to the
    /// nearer of `(T, K(T))` and `(T0(Z), Z)` in range-normalized distance.
    pub fn project(&self, p: Policy) -> Option<Policy> {
        let mut q = Policy {
            t: p.t.zip(self.t).map(|(v, (lo, hi))| v.clamp(lo, hi)),
            n: p.n.zip(self.n).map(|(v, (lo, hi))| v.clamp(lo, hi)),
            z: p.z.zip(self.z).map(|(v, (lo, hi))| v.clamp(lo, hi)),
        };
        if self.is_feasible(&q) {
            return Some(q);
        }
        let (t, z) = (q.t?, q.z?);
        let ((t_lo, t_hi), (z_lo, z_hi)) = (self.t?, self.z?);
        let mut best: Option<(f64, f64, f64)> = None;
        let lowered = self.strength.at(t);
        if lowered >= z_lo {
            best = Some((((z - lowered) / (z_hi - z_lo)).abs(), t, lowered));
        }
        if let Some(t0) = self.strength.crossing_time(z) {
            if t0 >= t_lo {
                let d = ((t - t0) / (t_hi - t_lo)).abs();
                if best.is_none_or(|b| d < b.0) {
                    best = Some((d, t0, z));
                }
            }
        }
        let (_, t, z) = best?;
        q.t = Some(t);
        q.z = Some(z);
        self.is_feasible(&q).then_some(q)
    }
}

/// Grid search settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Points per continuous axis in the first pass.
    pub coarse_points: usize,
    /// Resolution gain of each refinement pass.
    pub refine_factor: usize,
    pub passes: usize,
    /// First-pass stride on `N`; by default the smallest stride giving at
    /// most `coarse_points` values.
    pub n_stride: Option<u64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            coarse_points: 60,
            refine_factor: 10,
            passes: 3,
            n_stride: None,
        }
    }
}

/// Simulated annealing settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnealConfig {
    /// Defaults to the standard deviation of `initial_samples` random feasible evaluations.
    pub initial_temp: Option<f64>,
    pub cooling_ratio: f64,
    pub steps_per_temp: usize,
    /// Defaults to `1e-4` times the initial temperature.
    pub min_temp: Option<f64>,
    pub initial_samples: usize,
    /// Standard deviation of `T` and `Z` steps as a fraction of the axis range.
    pub step_fraction: f64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            initial_temp: None,
            cooling_ratio: 0.95,
            steps_per_temp: 30,
            min_temp: None,
            initial_samples: 50,
            step_fraction: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Grid,
    Anneal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceEntry {
    pub policy: Policy,
    pub value: f64,
    /// Grid: the candidate became the incumbent. Annealing: the move was accepted.
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimResult {
    pub best_policy: Policy,
    pub best_value: f64,
    /// Distinct policies evaluated.
    pub evaluations: usize,
    pub trace: Vec<TraceEntry>,
    pub method: Method,
    pub seed: u64,
    /// Incumbent value after each grid pass (empty for annealing).
    pub pass_best: Vec<f64>,
}

type Key = (u64, u64, u64);

fn key(p: &Policy) -> Key {
    (
        p.t.map_or(u64::MAX, f64::to_bits),
        p.n.unwrap_or(u64::MAX),
        p.z.map_or(u64::MAX, f64::to_bits),
    )
}

/// Strictly better value, or an equal value at smaller components.
fn improves(value: f64, p: &Policy, best: Option<(f64, Policy)>) -> bool {
    let Some((bv, bp)) = best else { return true };
    if value != bv {
        return value < bv;
    }
    let order = |p: &Policy| (p.t_or_inf(), p.n.unwrap_or(u64::MAX), p.z_or_inf());
    let (a, b) = (order(p), order(&bp));
    a.0.total_cmp(&b.0)
        .then(a.1.cmp(&b.1))
        .then(a.2.total_cmp(&b.2))
        .is_lt()
}

#[derive(Debug, Clone)]
enum AxisValues {
    Inactive,
    Real(Vec<f64>, f64),
    Count(Vec<u64>, u64),
}

impl AxisValues {
    fn real(lo: f64, hi: f64, points: usize) -> Self {
        let points = points.max(2);
        let step = (hi - lo) / (points - 1) as f64;
        let mut v: Vec<f64> = (0..points).map(|i| lo + i as f64 * step).collect();
        v[points - 1] = hi;
        AxisValues::Real(v, step)
    }

    fn refine_real(center: f64, step: f64, factor: usize, lo: f64, hi: f64) -> Self {
        let fine = step / factor as f64;
        let k = factor as i64;
        let v = (-k..=k)
            .map(|i| center + i as f64 * fine)
            .filter(|x| *x >= lo && *x <= hi)
            .collect();
        AxisValues::Real(v, fine)
    }

    fn count(lo: u64, hi: u64, stride: u64) -> Self {
        let mut v: Vec<u64> = (lo..=hi).step_by(stride as usize).collect();
        if *v.last().expect("nonempty range") != hi {
            v.push(hi);
        }
        AxisValues::Count(v, stride)
    }

    fn refine_count(center: u64, stride: u64, factor: usize, lo: u64, hi: u64) -> Self {
        let fine = (stride / factor as u64).max(1);
        let from = center.saturating_sub(stride).max(lo);
        let to = (center + stride).min(hi);
        let mut v: Vec<u64> = (from..=to).step_by(fine as usize).collect();
        if !v.contains(&center) {
            v.push(center);
            v.sort_unstable();
        }
        AxisValues::Count(v, fine)
    }

    fn reals(&self) -> Vec<Option<f64>> {
        match self {
            AxisValues::Real(v, _) => v.iter().map(|x| Some(*x)).collect(),
            _ => vec![None],
        }
    }

    fn counts(&self) -> Vec<Option<u64>> {
        match self {
            AxisValues::Count(v, _) => v.iter().map(|x| Some(*x)).collect(),
            _ => vec![None],
        }
    }
}

/// Memoized, order-preserving parallel evaluation.
struct Evaluator<'a, F> {
    objective: &'a F,
    cache: HashMap<Key, f64>,
}

impl<'a, F> Evaluator<'a, F>
where
    F: Fn(&Policy) -> Result<f64> + Sync,
{
    fn new(objective: &'a F) -> Self {
        Self {
            objective,
            cache: HashMap::new(),
        }
    }

    fn many(&mut self, policies: &[Policy]) -> Result<Vec<f64>> {
        let fresh: Vec<Policy> = {
            let mut seen = std::collections::HashSet::new();
            policies
                .iter()
                .filter(|p| !self.cache.contains_key(&key(p)) && seen.insert(key(p)))
                .copied()
                .collect()
        };
        let objective = self.objective;
        let values: Vec<Result<f64>> = fresh.par_iter().map(objective).collect();
        for (p, v) in fresh.iter().zip(values) {
            self.cache.insert(key(p), v?);
        }
        Ok(policies.iter().map(|p| self.cache[&key(p)]).collect())
    }

    fn one(&mut self, p: &Policy) -> Result<f64> {
        if let Some(v) = self.cache.get(&key(p)) {
            return Ok(*v);
        }
        let v = (self.objective)(p)?;
        self.cache.insert(key(p), v);
        Ok(v)
    }
}

/// Coarse grid over the space, then repeated refinement around the incumbent.
pub fn grid_search<F>(objective: F, space: &SearchSpace, config: &GridConfig) -> Result<OptimResult>
where
    F: Fn(&Policy) -> Result<f64> + Sync,
{
    space.validate()?;
    if config.coarse_points < 2 || config.refine_factor < 1 || config.passes < 1 {
        return Err(Error::validation(
            "optimizer.grid",
            "need coarse_points >= 2, refine_factor >= 1 and passes >= 1",
        ));
    }
    let mut t_axis = space
        .t
        .map_or(AxisValues::Inactive, |(lo, hi)| AxisValues::real(lo, hi, config.coarse_points));
    let mut z_axis = space
        .z
        .map_or(AxisValues::Inactive, |(lo, hi)| AxisValues::real(lo, hi, config.coarse_points));
    let mut n_axis = space.n.map_or(AxisValues::Inactive, |(lo, hi)| {
        let span = hi - lo + 1;
        let stride = config
            .n_stride
            .unwrap_or_else(|| span.div_ceil(config.coarse_points as u64))
            .max(1);
        AxisValues::count(lo, hi, stride)
    });

    let mut eval = Evaluator::new(&objective);
    let mut trace = Vec::new();
    let mut best: Option<(f64, Policy)> = None;
    let mut pass_best = Vec::new();

    for pass in 0..config.passes {
        let mut candidates = Vec::new();
        for t in t_axis.reals() {
            for n in n_axis.counts() {
                for z in z_axis.reals() {
                    let p = Policy { t, n, z };
                    if space.is_feasible(&p) {
                        candidates.push(p);
                    }
                }
            }
        }
        if candidates.is_empty() && pass == 0 {
            return Err(Error::InfeasibleSpace(
                "no grid point satisfies the bounds and Z <= K(T)".into(),
            ));
        }
        let values = eval.many(&candidates)?;
        for (p, v) in candidates.into_iter().zip(values) {
            let accepted = improves(v, &p, best);
            if accepted {
                best = Some((v, p));
            }
            trace.push(TraceEntry {
                policy: p,
                value: v,
                accepted,
            });
        }
        let (bv, bp) = best.expect("first pass has candidates");
        pass_best.push(bv);

        if let (AxisValues::Real(_, step), Some(t), Some((lo, hi))) = (&t_axis, bp.t, space.t) {
            t_axis = AxisValues::refine_real(t, *step, config.refine_factor, lo, hi);
        }
        if let (AxisValues::Real(_, step), Some(z), Some((lo, hi))) = (&z_axis, bp.z, space.z) {
            z_axis = AxisValues::refine_real(z, *step, config.refine_factor, lo, hi);
        }
        if let (AxisValues::Count(_, stride), Some(n), Some((lo, hi))) = (&n_axis, bp.n, space.n) {
            n_axis = AxisValues::refine_count(n, *stride, config.refine_factor, lo, hi);
        }
    }

    let (best_value, best_policy) = best.expect("at least one pass");
    Ok(OptimResult {
        best_policy,
        best_value,
        evaluations: eval.cache.len(),
        trace,
        method: Method::Grid,
        seed: 0,
        pass_best,
    })
}

fn reflect(x: f64, lo: f64, hi: f64) -> f64 {
    let mut x = x;
    for _ in 0..8 {
        if x < lo {
            x = 2.0 * lo - x;
        } else if x > hi {
            x = 2.0 * hi - x;
        } else {
            return x;
        }
    }
    x.clamp(lo, hi)
}

fn reflect_count(n: i64, lo: u64, hi: u64) -> u64 {
    let (lo, hi) = (lo as i64, hi as i64);
    let mut n = n;
    for _ in 0..8 {
        if n < lo {
            n = 2 * lo - n;
        } else if n > hi {
            n = 2 * hi - n;
        } else {
            break;
        }
    }
    n.clamp(lo, hi) as u64
}

fn random_point(space: &SearchSpace, rng: &mut RandomStream) -> Option<Policy> {
    let t = space.t.map(|(lo, hi)| lo + (hi - lo) * rng.uniform());
    let n = space
        .n
        .map(|(lo, hi)| (lo + ((hi - lo + 1) as f64 * rng.uniform()) as u64).min(hi));
    let z = space.z.map(|(lo, hi)| lo + (hi - lo) * rng.uniform());
    space.project(Policy { t, n, z })
}

fn propose(space: &SearchSpace, p: &Policy, frac: f64, rng: &mut RandomStream) -> Option<Policy> {
    let mut gauss = |lo: f64, hi: f64, x: f64| {
        reflect(x + frac * (hi - lo) * standard_normal_quantile(rng.uniform()), lo, hi)
    };
    let t = p.t.zip(space.t).map(|(x, (lo, hi))| gauss(lo, hi, x));
    let z = p.z.zip(space.z).map(|(x, (lo, hi))| gauss(lo, hi, x));
    let n = p.n.zip(space.n).map(|(x, (lo, hi))| {
        let size = 1 + (3.0 * rng.uniform()) as i64;
        let step = if rng.uniform() < 0.5 { -size.min(3) } else { size.min(3) };
        reflect_count(x as i64 + step, lo, hi)
    });
    space.project(Policy { t, n, z })
}

/// Metropolis search with geometric cooling. Returns the best point ever
/// evaluated, not the final state.
pub fn simulated_annealing<F>(
    objective: F,
    space: &SearchSpace,
    config: &AnnealConfig,
    seed: u64,
) -> Result<OptimResult>
where
    F: Fn(&Policy) -> Result<f64> + Sync,
{
    space.validate()?;
    if !(config.cooling_ratio > 0.0 && config.cooling_ratio < 1.0) || config.steps_per_temp == 0 {
        return Err(Error::validation(
            "optimizer.anneal",
            "need 0 < cooling_ratio < 1 and steps_per_temp >= 1",
        ));
    }
    let mut rng = RandomStream::new(seed, ANNEAL_STREAM);
    let mut eval = Evaluator::new(&objective);
    let mut trace = Vec::new();

    let samples: Vec<Policy> = (0..config.initial_samples.max(1))
        .filter_map(|_| random_point(space, &mut rng))
        .collect();
    if samples.is_empty() {
        return Err(Error::InfeasibleSpace(
            "no feasible starting point could be drawn".into(),
        ));
    }
    let values = eval.many(&samples)?;
    let mut best: Option<(f64, Policy)> = None;
    for (p, v) in samples.iter().zip(&values) {
        if improves(*v, p, best) {
            best = Some((*v, *p));
        }
    }
    let (start_value, start) = best.expect("samples nonempty");
    for (p, v) in samples.iter().zip(&values) {
        trace.push(TraceEntry {
            policy: *p,
            value: *v,
            accepted: *p == start,
        });
    }

    let initial_temp = config.initial_temp.unwrap_or_else(|| {
        let m = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - m).powi(2)).sum::<f64>()
            / (values.len().max(2) - 1) as f64;
        let sd = var.sqrt();
        if sd > 0.0 {
            sd
        } else {
            1e-9 * m.abs().max(1.0)
        }
    });
    let min_temp = config.min_temp.unwrap_or(1e-4 * initial_temp);

    let (mut current, mut current_value) = (start, start_value);
    let mut temp = initial_temp;
    while temp >= min_temp {
        for _ in 0..config.steps_per_temp {
            let Some(candidate) = propose(space, &current, config.step_fraction, &mut rng) else {
                continue;
            };
            let value = eval.one(&candidate)?;
            let delta = value - current_value;
            let accepted = delta <= 0.0 || rng.uniform() < (-delta / temp).exp();
            if accepted {
                current = candidate;
                current_value = value;
            }
            if improves(value, &candidate, best) {
                best = Some((value, candidate));
            }
            trace.push(TraceEntry {
                policy: candidate,
                value,
                accepted,
            });
        }
        temp *= config.cooling_ratio;
    }

    let (best_value, best_policy) = best.expect("initialized from samples");
    Ok(OptimResult {
        best_policy,
        best_value,
        evaluations: eval.cache.len(),
        trace,
        method: Method::Anneal,
        seed,
        pass_best: Vec::new(),
    })
}

/// Objective backed by the direct evaluator.
pub fn direct_objective<'a>(
    scenario: &'a Scenario,
    cfg: &'a NumericsConfig,
) -> impl Fn(&Policy) -> Result<f64> + Sync + 'a {
    move |p| Ok(direct::evaluate(scenario, p, cfg)?.cost_rate)
}

/// Objective backed by simulation with common random numbers.
pub fn simulation_objective(
    scenario: &Scenario,
    n_reps: u64,
    master_seed: u64,
) -> impl Fn(&Policy) -> Result<f64> + Sync + '_ {
    move |p| Ok(simulate::estimate_cost_rate(scenario, p, n_reps, master_seed)?.cost_rate)
}

/// Write the trace as CSV with header `step,T,N,Z,value,accepted`; inactive components are empty.
pub fn write_trace_csv<W: Write>(mut w: W, result: &OptimResult) -> std::io::Result<()> {
    writeln!(w, "step,T,N,Z,value,accepted")?;
    for (i, e) in result.trace.iter().enumerate() {
        writeln!(
            w,
            "{i},{},{},{},{},{}",
            e.policy.t.map(format_float).unwrap_or_default(),
            e.policy.n.map(|n| n.to_string()).unwrap_or_default(),
            e.policy.z.map(format_float).unwrap_or_default(),
            format_float(e.value),
            e.accepted
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line() -> StrengthCurve {
        StrengthCurve::Linear { a: 50.0, b: 1.0 }
    }

    fn quadratic(p: &Policy) -> Result<f64> {
        Ok((p.t.unwrap() - 3.0).powi(2))
    }

    #[test]
    fn grid_finds_synthetic_minimum() {
        let space = SearchSpace::new(line(), Some((0.0001, 10.0)), None, None).unwrap();
        let cfg = GridConfig {
            passes: 2,
            ..Default::default()
        };
        let r = grid_search(quadratic, &space, &cfg).unwrap();
        let step = (10.0 - 0.0001) / 59.0 / 10.0;
        assert!((r.best_policy.t.unwrap() - 3.0).abs() <= step);
        assert!(r.best_value < step * step);
        assert_eq!(r.pass_best.len(), 2);
    }

    #[test]
    fn anneal_finds_synthetic_minimum() {
        let space = SearchSpace::new(line(), Some((0.0001, 10.0)), None, None).unwrap();
        let r = simulated_annealing(quadratic, &space, &AnnealConfig::default(), 4).unwrap();
        assert!(r.best_value < 1e-3, "{}", r.best_value);
        let again = simulated_annealing(quadratic, &space, &AnnealConfig::default(), 4).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn ties_prefer_smaller_components() {
        let space = SearchSpace::new(line(), None, Some((1, 50)), None).unwrap();
        let flat = |_: &Policy| Ok(1.0);
        let r = grid_search(flat, &space, &GridConfig::default()).unwrap();
        assert_eq!(r.best_policy.n, Some(1));
    }

    #[test]
    fn infeasible_cells_are_skipped() {
        let space = SearchSpace::new(line(), Some((1.0, 40.0)), None, Some((1.0, 50.0))).unwrap();
        let seen = std::sync::Mutex::new(Vec::new());
        let f = |p: &Policy| {
            seen.lock().unwrap().push(*p);
            Ok(p.t.unwrap() + p.z.unwrap())
        };
        grid_search(f, &space, &GridConfig::default()).unwrap();
        for p in seen.into_inner().unwrap() {
            assert!(p.z.unwrap() <= 50.0 - p.t.unwrap());
        }
    }

    #[test]
    fn projection_lands_on_the_boundary() {
        let space = SearchSpace::new(line(), Some((1.0, 40.0)), None, Some((1.0, 50.0))).unwrap();
        let p = space.project(Policy::new(Some(30.0), None, Some(21.0))).unwrap();
        assert!(space.is_feasible(&p));
        assert_eq!(p, Policy::new(Some(30.0), None, Some(20.0)));
        // lowering Z is not allowed below its bound, so T moves instead
        let narrow = SearchSpace::new(line(), Some((1.0, 40.0)), None, Some((30.0, 50.0))).unwrap();
        let q = narrow.project(Policy::new(Some(25.0), None, Some(45.0))).unwrap();
        assert_eq!(q, Policy::new(Some(5.0), None, Some(45.0)));
    }

    #[test]
    fn empty_space_is_rejected() {
        assert!(SearchSpace::new(line(), None, None, None).is_err());
        assert!(SearchSpace::new(line(), None, None, Some((1.0, 60.0))).is_err());
        let tight = SearchSpace::new(line(), Some((49.0, 49.5)), None, Some((10.0, 20.0))).unwrap();
        assert!(matches!(
            grid_search(|_: &Policy| Ok(0.0), &tight, &GridConfig::default()),
            Err(Error::InfeasibleSpace(_))
        ));
    }

    #[test]
    fn trace_csv_marks_inactive_components_empty() {
        let space = SearchSpace::new(line(), None, Some((1, 3)), None).unwrap();
        let r = grid_search(|p: &Policy| Ok(p.n.unwrap() as f64), &space, &GridConfig::default()).unwrap();
        let mut buf = Vec::new();
        write_trace_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("step,T,N,Z,value,accepted\n0,,1,,"));
    }
}
