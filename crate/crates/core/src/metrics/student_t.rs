//! Student t distribution: CDF, two-sided tail probability and quantile,
//! built on the regularized incomplete beta function.

use statrs::function::beta::beta_reg;

/// P(|T| ≥ |t|) for `df` degrees of freedom.
pub fn two_sided_p(t: f64, df: f64) -> f64 {
    if t.is_nan() {
        return f64::NAN;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let x = df / (df + t * t);
    beta_reg(df / 2.0, 0.5, x)
}

pub fn cdf(t: f64, df: f64) -> f64 {
    let tail = 0.5 * two_sided_p(t, df);
    if t >= 0.0 {
        1.0 - tail
    } else {
        tail
    }
}

/// Upper-tail survival function P(T > t).
pub fn sf(t: f64, df: f64) -> f64 {
    1.0 - cdf(t, df)
}

/// The `t ≥ 0` with `two_sided_p(t, df) = alpha`, by bracketing and bisection.
pub fn two_sided_critical(alpha: f64, df: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must be in (0, 1)");
    assert!(df > 0.0, "df must be positive");
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    while two_sided_p(hi, df) > alpha {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if two_sided_p(mid, df) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Quantile function, `cdf(quantile(p)) = p`.
pub fn quantile(p: f64, df: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "p must be in (0, 1)");
    if p == 0.5 {
        return 0.0;
    }
    let t = two_sided_critical(2.0 * p.min(1.0 - p), df);
    if p > 0.5 {
        t
    } else {
        -t
    }
}
