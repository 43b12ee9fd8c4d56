//! Samplers against their laws: Kolmogorov-Smirnov tests on every family,
//! CDFs against an independent statistics library, and the moment structure
//! of dependent damage.

use statrs::distribution::{ContinuousCDF, Exp, Gamma, LogNormal, Weibull};
use wearout_core::stochastic::{ComponentLaw, Progression, ScheduleFamily, ScheduledParameter};
use wearout_core::{DamageModel, Distribution, RandomStream};

const N: usize = 20_000;
// 1% critical value of the one-sample KS statistic
const KS_CRIT: f64 = 1.628;

fn ks_statistic(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

fn assert_ks(xs: Vec<f64>, cdf: impl Fn(f64) -> f64, what: &str) {
    let d = ks_statistic(xs, cdf);
    let bound = KS_CRIT / (N as f64).sqrt();
    assert!(d < bound, "{what}: KS statistic {d} above {bound}");
}

fn draws(dist: &Distribution, seed: u64) -> Vec<f64> {
    let mut s = RandomStream::new(seed, 0);
    (0..N).map(|_| dist.sample(&mut s)).collect()
}

fn laws() -> Vec<(Distribution, Box<dyn Fn(f64) -> f64>)> {
    let exp = Exp::new(0.4).unwrap();
    let ln = LogNormal::new(2.0, 1.0).unwrap();
    let ln_heavy = LogNormal::new(-7.32, 3.16).unwrap();
    let wei = Weibull::new(15.0, 10.0).unwrap();
    let wei_low = Weibull::new(0.7, 2.0).unwrap();
    let gam = Gamma::new(0.193, 1.54).unwrap();
    let gam_big = Gamma::new(7.5, 0.5).unwrap();
    vec![
        (Distribution::exponential(0.4).unwrap(), Box::new(move |x| exp.cdf(x))),
        (Distribution::lognormal(2.0, 1.0).unwrap(), Box::new(move |x| ln.cdf(x))),
        (Distribution::lognormal(-7.32, 3.16).unwrap(), Box::new(move |x| ln_heavy.cdf(x))),
        (Distribution::weibull(10.0, 15.0).unwrap(), Box::new(move |x| wei.cdf(x))),
        (Distribution::weibull(2.0, 0.7).unwrap(), Box::new(move |x| wei_low.cdf(x))),
        // scale 1/1.54 and shape 0.193
        (Distribution::gamma(1.0 / 1.54, 0.193).unwrap(), Box::new(move |x| gam.cdf(x))),
        (Distribution::gamma(2.0, 7.5).unwrap(), Box::new(move |x| gam_big.cdf(x))),
    ]
}

#[test]
fn samplers_pass_ks_against_reference_cdfs() {
    for (k, (dist, reference)) in laws().into_iter().enumerate() {
        assert_ks(draws(&dist, 100 + k as u64), &reference, &format!("{dist:?}"));
    }
}

#[test]
fn cdfs_agree_with_reference_library() {
    for (dist, reference) in laws() {
        let xs: Vec<f64> = draws(&dist, 7).into_iter().take(500).collect();
        for x in xs {
            let (a, b) = (dist.cdf(x), reference(x));
            assert!((a - b).abs() < 1e-9, "{dist:?} at {x}: {a} vs {b}");
        }
    }
}

#[test]
fn deterministic_law_consumes_one_draw() {
    let d = Distribution::deterministic(3.5).unwrap();
    let mut s = RandomStream::new(1, 0);
    assert_eq!(d.sample(&mut s), 3.5);
    assert_eq!(s.draw_counter(), 1);
    assert_eq!(d.cdf(3.4), 0.0);
    assert_eq!(d.cdf(3.5), 1.0);
}

#[test]
fn replication_streams_are_independent() {
    // adjacent replication indices and adjacent seeds must look uncorrelated
    let pairs = [((5, 0), (5, 1)), ((5, 0), (6, 0)), ((0, 41), (1, 41))];
    for ((sa, ra), (sb, rb)) in pairs {
        let mut a = RandomStream::new(sa, ra);
        let mut b = RandomStream::new(sb, rb);
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..N).map(|_| (a.uniform(), b.uniform())).unzip();
        let mx = xs.iter().sum::<f64>() / N as f64;
        let my = ys.iter().sum::<f64>() / N as f64;
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>() / N as f64;
        let corr = cov / (1.0 / 12.0);
        assert!(corr.abs() < 4.0 / (N as f64).sqrt(), "correlation {corr}");
        assert_ne!(xs[..8], ys[..8]);
    }
}

#[test]
fn uniforms_stay_inside_the_open_interval() {
    let mut s = RandomStream::new(0, 0);
    for _ in 0..100_000 {
        let u = s.uniform();
        assert!(u > 0.0 && u < 1.0);
    }
}

fn schedule_draws(model: &DamageModel, i: u64) -> Vec<f64> {
    (0..N as u64)
        .map(|r| {
            let mut s = RandomStream::new(33, r);
            let mut shared = None;
            let mut last = 0.0;
            for j in 1..=i {
                let (w, sh) = model.damage_at(j, &mut s, shared).unwrap();
                shared = sh;
                last = w;
            }
            last
        })
        .collect()
}

#[test]
fn scheduled_damage_follows_its_indexed_law() {
    let gamma_rate = DamageModel::IndependentSchedule {
        family: ScheduleFamily::Gamma,
        base_scale: 0.5,
        shape: 5.0,
        progression: Progression::Geometric { ratio: 0.6 },
        parameter: ScheduledParameter::Rate,
    };
    // fourth shock: rate 0.5 * 0.6^3, so scale 1 / 0.108
    let law = Gamma::new(5.0, 0.108).unwrap();
    assert_ks(schedule_draws(&gamma_rate, 4), |x| law.cdf(x), "gamma rate schedule");

    let weibull = DamageModel::IndependentSchedule {
        family: ScheduleFamily::Weibull,
        base_scale: 10.0,
        shape: 15.0,
        progression: Progression::Arithmetic { step: -0.5 },
        parameter: ScheduledParameter::Scale,
    };
    let law = Weibull::new(15.0, 8.5).unwrap();
    assert_ks(schedule_draws(&weibull, 4), |x| law.cdf(x), "weibull scale schedule");
}

#[test]
fn dependent_damage_has_shared_covariance() {
    let (theta0, theta) = (0.5, 10.0);
    let model = DamageModel::DependentAdditive {
        theta0,
        theta,
        component: ComponentLaw::GammaShape,
    };
    let n = 40_000;
    let (mut w1, mut w3) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for r in 0..n as u64 {
        let mut s = RandomStream::new(9, r);
        let (a, sh) = model.damage_at(1, &mut s, None).unwrap();
        let (_, sh) = model.damage_at(2, &mut s, sh).unwrap();
        let (c, _) = model.damage_at(3, &mut s, sh).unwrap();
        w1.push(a);
        w3.push(c);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (m1, m3) = (mean(&w1), mean(&w3));
    let cov = w1.iter().zip(&w3).map(|(a, c)| (a - m1) * (c - m3)).sum::<f64>() / (n - 1) as f64;
    let diffs: Vec<f64> = w1.iter().zip(&w3).map(|(a, c)| a - c).collect();
    let md = mean(&diffs);
    let var_diff = diffs.iter().map(|d| (d - md).powi(2)).sum::<f64>() / (n - 1) as f64;

    assert!((m1 - (theta0 + theta)).abs() < 4.0 * ((theta0 + theta) / n as f64).sqrt());
    // sampling SE of the covariance is about sqrt(Var W1 Var W3 / n) ~ 0.05
    assert!((cov - theta0).abs() < 0.25, "covariance {cov}");
    assert!((var_diff - 2.0 * theta).abs() < 0.6, "variance of difference {var_diff}");
    assert_eq!(model.mean_at(7), theta0 + theta);
}
