//! Regularized incomplete gamma functions and the chi-square survival
//! function.
//!
//! `P(a, x)` uses the power series for `x < a + 1` and `Q(a, x)` the Lentz
//! continued fraction otherwise; the other one is taken as the complement.
//! Both converge to about 1e-15 relative, comfortably inside the 1e-8 target
//! for chi-square tails with up to 64 degrees of freedom.

use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;
const MAX_ITER: usize = 10_000;

fn series_lower(a: f64, x: f64) -> f64 {
    let mut ap = a;
    let mut del = 1.0 / a;
    let mut sum = del;
    for _ in 0..MAX_ITER {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * libm::exp(-x + a * libm::log(x) - libm::lgamma(a))
}

fn continued_fraction_upper(a: f64, x: f64) -> f64 {
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
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    libm::exp(-x + a * libm::log(x) - libm::lgamma(a)) * h
}

fn check(a: f64, x: f64) -> Result<()> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::param("a", "must be positive and finite"));
    }
    if x.is_nan() || x < 0.0 {
        return Err(Error::param("x", "must be nonnegative"));
    }
    Ok(())
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn gamma_p(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    Ok(if x == 0.0 {
        0.0
    } else if x.is_infinite() {
        1.0
    } else if x < a + 1.0 {
        series_lower(a, x)
    } else {
        1.0 - continued_fraction_upper(a, x)
    })
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 − P(a, x)`.
pub fn gamma_q(a: f64, x: f64) -> Result<f64> {
    check(a, x)?;
    Ok(if x == 0.0 {
        1.0
    } else if x.is_infinite() {
        0.0
    } else if x < a + 1.0 {
        1.0 - series_lower(a, x)
    } else {
        continued_fraction_upper(a, x)
    })
}

/// Survival function of the chi-square distribution, `Q(dof/2, stat/2)`.
pub fn chi_square_sf(stat: f64, dof: u32) -> Result<f64> {
    if dof == 0 {
        return Err(Error::param("dof", "must be at least 1"));
    }
    if stat.is_nan() {
        return Err(Error::param("stat", "is NaN"));
    }
    if stat <= 0.0 {
        return Ok(1.0);
    }
    gamma_q(f64::from(dof) / 2.0, stat / 2.0).map(|q| q.clamp(0.0, 1.0))
}
