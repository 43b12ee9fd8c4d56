//! Special functions used by the distributions and the direct evaluator.
//!
//! The regularized incomplete gamma is split the usual way: the power series
//! for `x < a + 1` and a Lentz continued fraction for the complement otherwise.
//! Both stop once a term falls below `EPS` relative to the running value, which
//! keeps the absolute error well under 1e-12 on the whole domain.

use statrs::function::gamma::ln_gamma;

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 100_000;

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn reg_lower_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    if x < a + 1.0 {
        lower_series(a, x)
    } else {
        1.0 - upper_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn reg_upper_gamma(a: f64, x: f64) -> f64 {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if x < a + 1.0 {
        1.0 - lower_series(a, x)
    } else {
        upper_fraction(a, x)
    }
}

fn log_prefactor(a: f64, x: f64) -> f64 {
    a * x.ln() - x - ln_gamma(a)
}

fn lower_series(a: f64, x: f64) -> f64 {
    let mut denom = a;
    let mut term = 1.0 / a;
    let mut sum = term;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum.ln() + log_prefactor(a, x)).exp().min(1.0)
}

fn upper_fraction(a: f64, x: f64) -> f64 {
    // modified Lentz on the even form of the continued fraction
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (log_prefactor(a, x) + h.ln()).exp().min(1.0)
}

/// `ln(n!)`.
pub fn ln_factorial(n: u64) -> f64 {
    ln_gamma(n as f64 + 1.0)
}

/// Poisson probability mass `P[Pois(mean) = j]`.
pub fn poisson_pmf(j: u64, mean: f64) -> f64 {
    if mean <= 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    (-mean + j as f64 * mean.ln() - ln_factorial(j)).exp()
}

/// Smallest `m` with `P[Pois(mean) <= m] >= prob`.
pub fn poisson_quantile(mean: f64, prob: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    // P[Pois(mean) <= m] = Q(m + 1, mean)
    let mut lo = 0u64;
    let mut hi = (mean + 10.0 * mean.sqrt() + 10.0).ceil() as u64;
    while reg_upper_gamma(hi as f64 + 1.0, mean) < prob {
        hi *= 2;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if reg_upper_gamma(mid as f64 + 1.0, mean) >= prob {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Quantile of the Erlang(`shape`, `rate`) law, by bisection on the CDF.
pub fn erlang_quantile(shape: u64, rate: f64, prob: f64) -> f64 {
    let a = shape.max(1) as f64;
    let mut hi = (a + 10.0 * a.sqrt() + 10.0) / rate;
    while reg_lower_gamma(a, rate * hi) < prob {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reg_lower_gamma(a, rate * mid) < prob {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from mpmath.gammainc(a, 0, x, regularized=True) at 30 digits.
    const LOWER_GAMMA_CASES: &[(f64, f64, f64)] = &[
        (0.193, 0.297, 0.821_667_601_550_721_4),
        (0.193, 0.297 / 1.54, 0.767_665_181_758_259_8),
        (1.0, 2.0, 0.864_664_716_763_387_3),
        (2.0, 1.0, 0.264_241_117_657_115_4),
        (5.0, 0.5, 0.000_172_115_629_955_840_8),
        (0.5, 3.0, 0.985_694_121_564_570_4),
        (10.0, 30.0, 0.999_992_878_249_137_2),
        (150.0, 140.0, 0.209_543_623_918_607_1),
        (1000.0, 1000.0, 0.504_205_244_180_215_5),
    ];

    #[test]
    fn lower_gamma_matches_reference() {
        for &(a, x, expected) in LOWER_GAMMA_CASES {
            let got = reg_lower_gamma(a, x);
            assert!(
                (got - expected).abs() < 1e-12,
                "P({a}, {x}) = {got}, expected {expected}"
            );
            assert!((reg_upper_gamma(a, x) - (1.0 - expected)).abs() < 1e-12);
        }
    }

    #[test]
    fn lower_gamma_boundaries() {
        assert_eq!(reg_lower_gamma(3.0, 0.0), 0.0);
        assert_eq!(reg_lower_gamma(3.0, -1.0), 0.0);
        assert_eq!(reg_lower_gamma(3.0, f64::INFINITY), 1.0);
    }

    #[test]
    fn poisson_quantile_brackets() {
        let m = poisson_quantile(4.0, 0.99);
        assert!(reg_upper_gamma(m as f64 + 1.0, 4.0) >= 0.99);
        assert!(reg_upper_gamma(m as f64, 4.0) < 0.99);
        assert_eq!(poisson_quantile(0.0, 0.5), 0);
    }

    #[test]
    fn erlang_quantile_inverts_cdf() {
        let q = erlang_quantile(7, 0.4, 1.0 - 1e-10);
        assert!((reg_lower_gamma(7.0, 0.4 * q) - (1.0 - 1e-10)).abs() < 1e-12);
    }
}
