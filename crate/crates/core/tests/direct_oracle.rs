//! The direct Exp/Exp evaluator against closed forms, reductions between
//! policy kinds, series audits and Monte Carlo estimates.

use statrs::distribution::{Discrete, DiscreteCDF, Poisson};
use wearout_core::direct::{evaluate, NumericsConfig};
use wearout_core::simulate::estimate_cost_rate;
use wearout_core::{CostVector, DamageModel, Distribution, Policy, Scenario, StrengthCurve};

fn exp_exp(lambda: f64, mu: f64, curve: StrengthCurve, costs: CostVector) -> Scenario {
    Scenario::new(
        "exp/exp",
        Distribution::exponential(lambda).unwrap(),
        DamageModel::iid(Distribution::exponential(mu).unwrap()),
        curve,
        costs,
    )
    .unwrap()
}

fn table_scenarios() -> Vec<Scenario> {
    vec![
        exp_exp(0.4, 4.0, StrengthCurve::ExponentialDecay { a: 100.0, b: 0.1 }, CostVector::unit(5.0)),
        exp_exp(0.5, 0.5, StrengthCurve::Linear { a: 50.0, b: 1.0 }, CostVector::unit(5.0)),
        exp_exp(0.5, 1.0, StrengthCurve::Constant { k: 10.0 }, CostVector::unit(5.0)),
    ]
}

fn policies(s: &Scenario) -> Vec<Policy> {
    let k0 = s.strength.initial();
    let t = 0.8 * s.mu_f() * 10.0;
    let z = (0.3 * k0).min(s.strength.at(t));
    vec![
        Policy::time(t),
        Policy::count(6),
        Policy::count(25),
        Policy::level(0.5 * k0),
        Policy::joint(t, 12, z),
        Policy::joint(1.5 * t, 4, 0.9 * s.strength.at(1.5 * t)),
    ]
}

#[test]
fn series_truncation_is_converged() {
    let base = NumericsConfig::default();
    let audit = NumericsConfig {
        audit_extra_terms: 100,
        ..base
    };
    for s in table_scenarios() {
        for p in policies(&s) {
            let a = evaluate(&s, &p, &base).unwrap().cost_rate;
            let b = evaluate(&s, &p, &audit).unwrap().cost_rate;
            assert!(((a - b) / b).abs() < 1e-9, "{p}: {a} vs {b}");
        }
    }
}

#[test]
fn equal_costs_give_reciprocal_mean_cycle() {
    let c = 2.5;
    let costs = CostVector {
        c_t: c,
        c_n: c,
        c_z: c,
        c_k: c,
    };
    for s in table_scenarios() {
        let s = s.with_costs(costs);
        for p in policies(&s) {
            let e = evaluate(&s, &p, &NumericsConfig::default()).unwrap();
            assert!((e.probabilities.sum() - 1.0).abs() < 1e-8, "{p}: {:?}", e.probabilities);
            assert!((e.cost_rate - c / e.mean_t_r).abs() < 1e-8 * e.cost_rate, "{p}");
        }
    }
}

#[test]
fn constant_strength_count_policy_matches_poisson_closed_form() {
    // with constant strength J - 1 ~ Poisson(mu K) counts shocks survived
    let (lambda, mu, k) = (0.5, 1.0, 10.0);
    let s = exp_exp(lambda, mu, StrengthCurve::Constant { k }, CostVector::unit(5.0));
    let pois = Poisson::new(mu * k).unwrap();
    for n in [1u64, 3, 9, 10, 15, 40] {
        let survive = |m: u64| if m == 0 { 1.0 } else { pois.sf(m - 1) };
        let expected_shocks: f64 = (0..n).map(survive).sum();
        let p_k = pois.cdf(n - 1);
        let mean = expected_shocks / lambda;
        let rate = (1.0 * (1.0 - p_k) + 5.0 * p_k) / mean;

        let e = evaluate(&s, &Policy::count(n), &NumericsConfig::default()).unwrap();
        assert!((e.probabilities.p_k - p_k).abs() < 1e-10, "N = {n}");
        assert!((e.mean_t_r - mean).abs() < 1e-9 * mean, "N = {n}");
        assert!((e.cost_rate - rate).abs() < 1e-9 * rate, "N = {n}");
    }
    // one-shock failure probability checked against the pmf directly
    let e = evaluate(&s, &Policy::count(1), &NumericsConfig::default()).unwrap();
    assert!((e.probabilities.p_k - pois.pmf(0)).abs() < 1e-10);
}

#[test]
fn joint_policy_reduces_to_single_triggers() {
    let s = exp_exp(0.5, 1.0, StrengthCurve::Constant { k: 10.0 }, CostVector::unit(5.0));
    let cfg = NumericsConfig::default();
    let rate = |p: Policy| evaluate(&s, &p, &cfg).unwrap().cost_rate;

    // Z at full strength never fires before failure; a huge N never fires
    let joint_t = rate(Policy::joint(20.25, 100_000, 10.0));
    let t_only = rate(Policy::time(20.25));
    assert!((joint_t - t_only).abs() < 2e-3 * t_only, "{joint_t} vs {t_only}");

    let joint_n = rate(Policy::joint(1e6, 9, 10.0));
    let n_only = rate(Policy::count(9));
    assert!((joint_n - n_only).abs() < 2e-3 * n_only, "{joint_n} vs {n_only}");

    let joint_z = rate(Policy::joint(1e6, 100_000, 7.93));
    let z_only = rate(Policy::level(7.93));
    assert!((joint_z - z_only).abs() < 2e-3 * z_only, "{joint_z} vs {z_only}");
}

#[test]
fn direct_values_agree_with_simulation() {
    let reps = 100_000;
    for (k, s) in table_scenarios().into_iter().enumerate() {
        for p in policies(&s) {
            let d = evaluate(&s, &p, &NumericsConfig::default()).unwrap().cost_rate;
            let mc = estimate_cost_rate(&s, &p, reps, 1000 + k as u64).unwrap();
            let gap = (mc.cost_rate - d).abs();
            assert!(
                gap <= 3.0 * mc.std_error_cost_rate + 1e-9 * d,
                "{p}: direct {d}, simulated {} +/- {}",
                mc.cost_rate,
                mc.std_error_cost_rate
            );
        }
    }
}
