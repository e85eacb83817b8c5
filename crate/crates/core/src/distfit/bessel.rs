//! Modified Bessel functions of the first kind, orders 0 and 1.
//!
//! Power series below [`SERIES_LIMIT`], Hankel asymptotic expansion above it.
//! The exponentially scaled forms (`I_n(x) e^{-x}`) and the log form are
//! what the Rician density needs: `I0(y s / sigma^2)` overflows `f64` long
//! before the density itself does.

use crate::error::{Error, Result};

/// Arguments below this use the power series, at or above it the asymptotic expansion.
pub const SERIES_LIMIT: f64 = 20.0;

const MAX_TERMS: usize = 500;

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::domain(format!(
            "Bessel argument must be >= 0, got {x}"
        )));
    }
    Ok(())
}

// sum_k (x^2/4)^k / (k!)^2
fn i0_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * kf);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

// (x/2) sum_k (x^2/4)^k / (k! (k+1)!)
fn i1_series(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..MAX_TERMS {
        let kf = k as f64;
        term *= q / (kf * (kf + 1.0));
        sum += term;
        if term <= sum * 1e-17 {
            break;
        }
    }
    sum
}

/// `I_nu(x) e^{-x}` from the large-argument expansion, `mu = 4 nu^2`.
fn scaled_asymptotic(mu: f64, x: f64) -> f64 {
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..MAX_TERMS {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        // the series is asymptotic: stop at the smallest term
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

pub(crate) fn i0e_unchecked(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        i0_series(x) * (-x).exp()
    } else {
        scaled_asymptotic(0.0, x)
    }
}

pub(crate) fn i1e_unchecked(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        i1_series(x) * (-x).exp()
    } else {
        scaled_asymptotic(4.0, x)
    }
}

pub(crate) fn ln_i0e_unchecked(x: f64) -> f64 {
    if x < SERIES_LIMIT {
        i0_series(x).ln() - x
    } else {
        scaled_asymptotic(0.0, x).ln()
    }
}

/// `I1(x) / I0(x)`, the derivative of `ln I0`.
pub(crate) fn i1_over_i0(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if x < SERIES_LIMIT {
        i1_series(x) / i0_series(x)
    } else {
        scaled_asymptotic(4.0, x) / scaled_asymptotic(0.0, x)
    }
}

/// `I0(x)`. Overflows to `+inf` past `x ~ 713`; use [`log_bessel_i0`] there.
pub fn bessel_i0(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x < SERIES_LIMIT {
        Ok(i0_series(x))
    } else {
        Ok(scaled_asymptotic(0.0, x) * x.exp())
    }
}

/// Exponentially scaled `I0(x) e^{-x}`; finite for every finite `x >= 0`.
pub fn bessel_i0e(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(i0e_unchecked(x))
}

/// `I1(x) * exp(-x)`.
pub fn bessel_i1e(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(i1e_unchecked(x))
}

/// `I1(x)`.
pub fn bessel_i1(x: f64) -> Result<f64> {
    check_arg(x)?;
    if x < SERIES_LIMIT {
        Ok(i1_series(x))
    } else {
        Ok(scaled_asymptotic(4.0, x) * x.exp())
    }
}

/// `ln I0(x)`, accurate well beyond the range where `I0` itself is representable.
pub fn log_bessel_i0(x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(ln_i0e_unchecked(x) + x)
}
