//! Reproducibility: identical inputs give bit-identical outputs regardless
//! of repetition or thread count, and costs enter the cost rate linearly.

use rayon::ThreadPoolBuilder;
use wearout_core::direct::{evaluate, NumericsConfig};
use wearout_core::optimize::{direct_objective, grid_search, simulated_annealing, simulation_objective, AnnealConfig, GridConfig, SearchSpace};
use wearout_core::simulate::{estimate_cost_rate, simulate_outcomes};
use wearout_core::scenario::scenario_from_value;
use wearout_core::{CostVector, Policy, Scenario};

fn scenario(name: &str) -> Scenario {
    let path = format!("{}/../../scenarios/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    // run settings live beside the model in bundled files
    doc.as_object_mut().unwrap().remove("optimizer");
    scenario_from_value(doc).unwrap()
}

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn simulation_is_bit_identical_across_runs_and_pools() {
    let s = scenario("dependent_lognormal_decay");
    let p = Policy::joint(30.0, 5, 20.0);
    let reference = estimate_cost_rate(&s, &p, 20_000, 42).unwrap();
    assert_eq!(estimate_cost_rate(&s, &p, 20_000, 42).unwrap(), reference);
    for threads in [1, 4, 8] {
        let again = in_pool(threads, || estimate_cost_rate(&s, &p, 20_000, 42).unwrap());
        assert_eq!(again.cost_rate.to_bits(), reference.cost_rate.to_bits(), "{threads} threads");
        assert_eq!(again, reference);
    }
    let outcomes = simulate_outcomes(&s, &p, 3000, 42).unwrap();
    let pooled = in_pool(4, || simulate_outcomes(&s, &p, 3000, 42).unwrap());
    assert_eq!(outcomes, pooled);
}

#[test]
fn different_seeds_give_different_estimates() {
    let s = scenario("lognormal_decay_150");
    let p = Policy::time(26.0);
    let a = estimate_cost_rate(&s, &p, 5000, 1).unwrap();
    let b = estimate_cost_rate(&s, &p, 5000, 2).unwrap();
    assert_ne!(a.cost_rate, b.cost_rate);
}

#[test]
fn optimizers_are_reproducible_across_pools() {
    let s = scenario("schedule_weibull_growing");
    let space = SearchSpace::new(s.strength, Some((1.0, 60.0)), Some((1, 20)), None).unwrap();
    let grid = GridConfig {
        coarse_points: 10,
        refine_factor: 3,
        passes: 2,
        n_stride: None,
    };
    let run = || grid_search(simulation_objective(&s, 2000, 3), &space, &grid).unwrap();
    let reference = run();
    for threads in [1, 4, 8] {
        assert_eq!(in_pool(threads, run), reference, "{threads} threads");
    }

    let anneal = AnnealConfig {
        steps_per_temp: 10,
        cooling_ratio: 0.8,
        ..Default::default()
    };
    let run = || simulated_annealing(simulation_objective(&s, 1000, 3), &space, &anneal, 11).unwrap();
    let reference = run();
    assert_eq!(in_pool(4, run), reference);
}

#[test]
fn power_of_two_cost_scaling_is_exact() {
    let sim = scenario("lognormal_linear_60");
    let exp = scenario("exp_decay_100");
    let p = Policy::joint(25.0, 6, 8.0);
    let cfg = NumericsConfig::default();
    let base_sim = estimate_cost_rate(&sim, &p, 5000, 8).unwrap();
    let base_dir = evaluate(&exp, &p, &cfg).unwrap();
    for k in [0.25, 2.0, 8.0, 1024.0] {
        let scaled_sim = estimate_cost_rate(&sim.with_costs(sim.costs.scaled(k)), &p, 5000, 8).unwrap();
        assert_eq!(scaled_sim.cost_rate, k * base_sim.cost_rate);
        assert_eq!(scaled_sim.std_error_cost_rate, k * base_sim.std_error_cost_rate);
        let scaled_dir = evaluate(&exp.with_costs(exp.costs.scaled(k)), &p, &cfg).unwrap();
        assert_eq!(scaled_dir.cost_rate, k * base_dir.cost_rate);
    }
    // other factors agree to rounding
    let scaled = evaluate(&exp.with_costs(exp.costs.scaled(3.7)), &p, &cfg).unwrap();
    assert!((scaled.cost_rate - 3.7 * base_dir.cost_rate).abs() < 1e-14 * scaled.cost_rate);
}

#[test]
fn optimum_policy_is_invariant_to_cost_scale() {
    let s = scenario("exp_decay_100").with_costs(CostVector::unit(5.0));
    let cfg = NumericsConfig::default();
    let space = SearchSpace::default_for(&s, true, false, false).unwrap();
    let grid = GridConfig {
        coarse_points: 20,
        refine_factor: 5,
        passes: 2,
        n_stride: None,
    };
    let base = grid_search(direct_objective(&s, &cfg), &space, &grid).unwrap();
    for k in [0.5, 16.0] {
        let scaled_s = s.with_costs(s.costs.scaled(k));
        let scaled = grid_search(direct_objective(&scaled_s, &cfg), &space, &grid).unwrap();
        assert_eq!(scaled.best_policy, base.best_policy);
        assert_eq!(scaled.best_value, k * base.best_value);
    }
}
