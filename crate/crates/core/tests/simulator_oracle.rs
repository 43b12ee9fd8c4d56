//! The event-driven simulator against a naive full-path implementation of
//! the published algorithm: simulate shocks until the damage reaches the
//! modified level, find the crossing time, then classify the cycle.
//! Both consume the same stream, so outcomes must agree exactly.

use wearout_core::scenario::check_policy;
use wearout_core::simulate::{simulate_lifetime, SHOCK_CAP};
use wearout_core::stochastic::{ComponentLaw, Progression, ScheduleFamily, ScheduledParameter};
use wearout_core::{Cause, CostVector, DamageModel, Distribution, Policy, RandomStream, Scenario, StrengthCurve};

fn naive(s: &Scenario, p: &Policy, stream: &mut RandomStream) -> (f64, Cause) {
    let t_plan = p.t_or_inf();
    let z = p.z_or_inf();
    let n = p.n.unwrap_or(u64::MAX);
    let curve = s.strength;
    let t0 = p.z.map_or(f64::INFINITY, |z| curve.z_horizon(z).unwrap());
    let k_mod = |t: f64| z.min(curve.at(t));

    let (mut time, mut l, mut shared) = (0.0, 0.0, None);
    let mut s_n = f64::NAN;
    let mut i = 0u64;
    let (crossing, at_shock, l_at_crossing) = loop {
        i += 1;
        assert!(i <= SHOCK_CAP);
        let x = s.inter_arrival.sample(stream);
        let (w, sh) = s.damage.damage_at(i, stream, shared).unwrap();
        shared = sh;
        time += x;
        let l_prev = l;
        l += w;
        if i == n {
            s_n = time;
        }
        if l < k_mod(time) {
            continue;
        }
        // ties: strength falling exactly to the old damage at S_i is a crossing at S_i either way
        if l_prev < k_mod(time) {
            break (time, true, l);
        }
        break (curve.crossing_time(l_prev).unwrap(), false, l);
    };

    if n < i {
        return if s_n <= t_plan { (s_n, Cause::ShockCount) } else { (t_plan, Cause::PlannedTime) };
    }
    if at_shock && crossing < t0 && l_at_crossing < curve.at(crossing) {
        return if t_plan < crossing { (t_plan, Cause::PlannedTime) } else { (crossing, Cause::DamageLevel) };
    }
    if crossing <= t_plan {
        (crossing, Cause::Failure)
    } else {
        (t_plan, Cause::PlannedTime)
    }
}

fn scenario(f: Distribution, g: DamageModel, k: StrengthCurve) -> Scenario {
    Scenario::new("oracle", f, g, k, CostVector::unit(3.0)).unwrap()
}

fn exp(rate: f64) -> Distribution {
    Distribution::exponential(rate).unwrap()
}

fn scenarios() -> Vec<(Scenario, Vec<Policy>)> {
    let decay = StrengthCurve::ExponentialDecay { a: 100.0, b: 0.1 };
    let linear = StrengthCurve::Linear { a: 50.0, b: 1.0 };
    let constant = StrengthCurve::Constant { k: 10.0 };
    let ln = Distribution::lognormal(2.0, 1.0).unwrap();
    let wei = Distribution::weibull(10.0, 5.0).unwrap();
    vec![
        (
            scenario(exp(0.4), DamageModel::iid(exp(4.0)), decay),
            vec![
                Policy::time(29.3),
                Policy::count(10),
                Policy::level(2.5),
                Policy::joint(31.2, 19, 4.2),
                Policy::joint(10.0, 3, 30.0),
                Policy::new(Some(25.0), Some(12), None),
            ],
        ),
        (
            scenario(exp(0.5), DamageModel::iid(exp(0.5)), linear),
            vec![
                Policy::time(20.5),
                Policy::count(10),
                Policy::level(18.5),
                Policy::joint(24.2, 13, 21.5),
                Policy::new(None, Some(8), Some(15.0)),
                Policy::time(70.0),
            ],
        ),
        (
            scenario(exp(0.5), DamageModel::iid(exp(1.0)), constant),
            vec![Policy::time(20.25), Policy::count(9), Policy::level(7.93), Policy::joint(15.0, 8, 9.0)],
        ),
        (
            scenario(ln, DamageModel::iid(Distribution::weibull(10.0, 15.0).unwrap()), StrengthCurve::ExponentialDecay { a: 150.0, b: 0.05 }),
            vec![Policy::time(26.0), Policy::count(3), Policy::level(21.0), Policy::joint(35.0, 4, 25.9)],
        ),
        (
            scenario(Distribution::lognormal(1.0, 1.0).unwrap(), DamageModel::iid(wei), StrengthCurve::Linear { a: 60.0, b: 1.0 }),
            vec![Policy::time(15.5), Policy::level(30.0), Policy::joint(30.4, 4, 23.7)],
        ),
        (
            scenario(
                exp(0.4),
                DamageModel::IndependentSchedule {
                    family: ScheduleFamily::Gamma,
                    base_scale: 0.5,
                    shape: 5.0,
                    progression: Progression::Geometric { ratio: 0.6 },
                    parameter: ScheduledParameter::Rate,
                },
                StrengthCurve::Linear { a: 60.0, b: 1.0 },
            ),
            vec![Policy::time(5.3), Policy::count(2), Policy::joint(24.0, 3, 14.8)],
        ),
        (
            scenario(
                ln,
                DamageModel::IndependentSchedule {
                    family: ScheduleFamily::Weibull,
                    base_scale: 10.0,
                    shape: 15.0,
                    progression: Progression::Arithmetic { step: 0.5 },
                    parameter: ScheduledParameter::Scale,
                },
                StrengthCurve::ExponentialDecay { a: 50.0, b: 0.05 },
            ),
            vec![Policy::time(18.0), Policy::joint(22.0, 4, 16.0)],
        ),
        (
            scenario(
                exp(0.2),
                DamageModel::DependentAdditive {
                    theta0: 0.5,
                    theta: 10.0,
                    component: ComponentLaw::GammaShape,
                },
                decay,
            ),
            vec![Policy::time(10.8), Policy::count(2), Policy::level(18.9), Policy::joint(13.6, 4, 24.9)],
        ),
        (
            scenario(
                ln,
                DamageModel::DependentAdditive {
                    theta0: 0.5,
                    theta: 5.0,
                    component: ComponentLaw::Exponential,
                },
                StrengthCurve::Linear { a: 50.0, b: 1.0 },
            ),
            vec![Policy::level(12.9), Policy::joint(33.9, 4, 16.1)],
        ),
        (
            scenario(exp(1.0 / 3.45), DamageModel::iid(Distribution::lognormal(-7.32, 3.16).unwrap()), StrengthCurve::Constant { k: 5.0 }),
            vec![Policy::joint(708.89, 183, 3.86), Policy::level(3.5)],
        ),
    ]
}

#[test]
fn event_driven_simulator_matches_full_path_algorithm() {
    let mut compared = 0;
    for (s, policies) in scenarios() {
        for p in policies {
            check_policy(&s, &p).unwrap();
            for r in 0..3000 {
                let fast = simulate_lifetime(&s, &p, &mut RandomStream::new(17, r)).unwrap();
                let slow = naive(&s, &p, &mut RandomStream::new(17, r));
                assert_eq!(
                    (fast.t_r, fast.cause),
                    slow,
                    "scenario {:?}, policy {p}, replication {r}",
                    s.strength
                );
                compared += 1;
            }
        }
    }
    assert!(compared > 100_000);
}

#[test]
fn linear_strength_exhausted_before_the_first_shock() {
    // strength reaches zero at t = 1 while shocks average 100 time units apart
    let s = scenario(exp(0.01), DamageModel::iid(exp(1.0)), StrengthCurve::Linear { a: 1.0, b: 1.0 });
    for r in 0..200 {
        let fast = simulate_lifetime(&s, &Policy::time(5.0), &mut RandomStream::new(2, r)).unwrap();
        let slow = naive(&s, &Policy::time(5.0), &mut RandomStream::new(2, r));
        assert_eq!((fast.t_r, fast.cause), slow);
    }
}
