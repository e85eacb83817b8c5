use super::bessel::{i1_over_i0, ln_i0e_unchecked};
use super::{neumaier_sum, RicianParams, SampleVector};
use crate::error::{Error, Result};

/// Relative parameter-change tolerance of the Rician likelihood ascent.
pub const RICIAN_TOL: f64 = 1e-9;
/// Iteration cap of the Rician likelihood ascent.
pub const RICIAN_MAX_ITER: usize = 200;

/// `(y/sigma^2) exp(-(y^2+s^2)/(2 sigma^2)) I0(y s / sigma^2)`, evaluated in the log domain.
pub fn rician_pdf(y: f64, params: &RicianParams) -> Result<f64> {
    Ok(rician_ln_pdf(y, params)?.exp())
}

/// Natural log of [`rician_pdf`]; `-inf` at `y = 0`.
///
/// Uses `ln I0(z) = z + ln(I0(z) e^{-z})` so the exponent collapses to
/// `-(y - s)^2 / (2 sigma^2)` and nothing overflows for large `y s / sigma^2`.
pub fn rician_ln_pdf(y: f64, params: &RicianParams) -> Result<f64> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::domain(format!(
            "density argument must be >= 0, got {y}"
        )));
    }
    if y == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let (sigma, s) = (params.sigma(), params.s());
    let var = sigma * sigma;
    let d = y - s;
    Ok(y.ln() - 2.0 * sigma.ln() - d * d / (2.0 * var) + ln_i0e_unchecked(y * s / var))
}

// Log-likelihood without the parameter-free sum(ln y), in u = 1/sigma^2.
fn objective(ys: &[f64], u: f64, s: f64) -> f64 {
    let n = ys.len() as f64;
    n * u.ln()
        + neumaier_sum(ys.iter().map(|&y| {
            let d = y - s;
            -0.5 * d * d * u + ln_i0e_unchecked(y * s * u)
        }))
}

struct Derivs {
    g_u: f64,
    g_s: f64,
    h_uu: f64,
    h_ss: f64,
    h_us: f64,
    // mean(A(z) y), the EM update for s
    em_s: f64,
}

fn derivatives(ys: &[f64], u: f64, s: f64) -> Derivs {
    let n = ys.len() as f64;
    let (mut g_u, mut g_s, mut h_uu, mut h_ss, mut h_us, mut ay) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for &y in ys {
        let z = y * s * u;
        let a = i1_over_i0(z);
        // d/dz of I1/I0
        let da = if z < 1e-4 {
            0.5 - 3.0 * z * z / 16.0
        } else {
            1.0 - a / z - a * a
        };
        g_u += -(y * y + s * s) / 2.0 + a * y * s;
        g_s += (a * y - s) * u;
        h_uu += da * (y * s) * (y * s);
        h_ss += -u + da * (y * u) * (y * u);
        h_us += -s + a * y + da * (y * s) * (y * u);
        ay += a * y;
    }
    Derivs {
        g_u: g_u + n / u,
        g_s,
        h_uu: h_uu - n / (u * u),
        h_ss,
        h_us,
        em_s: ay / n,
    }
}

/// Maximum-likelihood Rician fit.
///
/// Starts from the moments of the power samples `y^2`
/// (`s^4 = 2 m2^2 - m4`, `2 sigma^2 = m2 - s^2`). When that gives no positive
/// `s^4` the data are at least as dispersed as a Rayleigh sample and the
/// Rayleigh reduction (`s = 0`, closed-form scale) is returned. Otherwise
/// Newton ascent with backtracking refines the estimate, falling back to an
/// EM step where the Hessian is not negative definite, until both parameters
/// move by less than [`RICIAN_TOL`]` * sigma`.
pub fn estimate_rician_params(samples: &SampleVector) -> Result<RicianParams> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::degenerate(format!(
            "Rician fit needs at least 2 samples, got {n}"
        )));
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &y| {
            (lo.min(y), hi.max(y))
        });
    if hi == 0.0 {
        return Err(Error::degenerate("all samples are zero"));
    }
    if hi - lo <= hi * 1e-12 {
        return Err(Error::degenerate(
            "all samples are equal; sample variance is zero",
        ));
    }

    // work in units of the RMS amplitude so the tolerances are unit-free
    let m2_raw = neumaier_sum(samples.iter().map(|y| y * y)) / n as f64;
    let unit = m2_raw.sqrt();
    let ys: Vec<f64> = samples.iter().map(|y| y / unit).collect();
    let m4 = neumaier_sum(ys.iter().map(|y| (y * y) * (y * y))) / n as f64;
    let m2 = neumaier_sum(ys.iter().map(|y| y * y)) / n as f64;

    let s4 = 2.0 * m2 * m2 - m4;
    if s4 <= 0.0 {
        return RicianParams::new(unit * (m2 / 2.0).sqrt(), 0.0);
    }
    let mut s = s4.sqrt().sqrt();
    let var0 = (m2 - s * s) / 2.0;
    if !(var0 > 0.0) {
        return Err(Error::degenerate(
            "moment initialisation leaves no scatter variance",
        ));
    }
    let mut u = 1.0 / var0;
    let mut current = objective(&ys, u, s);

    let mut last_step = f64::INFINITY;
    for _ in 0..RICIAN_MAX_ITER {
        let d = derivatives(&ys, u, s);
        let det = d.h_uu * d.h_ss - d.h_us * d.h_us;
        let (du, ds) = if d.h_uu < 0.0 && det > 0.0 {
            (
                -(d.h_ss * d.g_u - d.h_us * d.g_s) / det,
                -(-d.h_us * d.g_u + d.h_uu * d.g_s) / det,
            )
        } else {
            let s_em = d.em_s;
            let var_em = ((m2 - s_em * s_em) / 2.0).max(f64::MIN_POSITIVE);
            (1.0 / var_em - u, s_em - s)
        };

        // stay inside u > 0, s >= 0: never move more than halfway to a boundary
        let mut alpha = 1.0_f64;
        if u + du <= 0.0 {
            alpha = alpha.min(0.5 * u / -du);
        }
        if s + ds < 0.0 {
            alpha = alpha.min(0.5 * s / -ds);
        }
        let mut accepted = None;
        while alpha > 1e-12 {
            let (nu, ns) = (u + alpha * du, s + alpha * ds);
            let value = objective(&ys, nu, ns);
            if value >= current - 1e-13 * current.abs() {
                accepted = Some((nu, ns, value));
                break;
            }
            alpha *= 0.5;
        }
        let Some((nu, ns, value)) = accepted else {
            // no ascent direction left at working precision
            last_step = 0.0;
            break;
        };
        let sigma_old = u.sqrt().recip();
        let sigma_new = nu.sqrt().recip();
        last_step = (sigma_new - sigma_old).abs().max((ns - s).abs());
        u = nu;
        s = ns;
        current = value;
        if last_step < RICIAN_TOL * sigma_new {
            break;
        }
    }
    let sigma = u.sqrt().recip();
    if last_step >= RICIAN_TOL * sigma {
        return Err(Error::NonConvergence {
            iterations: RICIAN_MAX_ITER,
            last_step: last_step * unit,
        });
    }
    RicianParams::new(unit * sigma, unit * s)
}
