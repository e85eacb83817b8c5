use super::{neumaier_sum, RayleighParams, SampleVector};
use crate::error::{Error, Result};

fn check_y(y: f64) -> Result<()> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::domain(format!(
            "density argument must be >= 0, got {y}"
        )));
    }
    Ok(())
}

/// `(y / sigma^2) exp(-y^2 / (2 sigma^2))`.
pub fn rayleigh_pdf(y: f64, params: &RayleighParams) -> Result<f64> {
    check_y(y)?;
    let var = params.sigma() * params.sigma();
    Ok(y / var * (-y * y / (2.0 * var)).exp())
}

/// Natural log of [`rayleigh_pdf`]; `-inf` at `y = 0`.
pub fn rayleigh_ln_pdf(y: f64, params: &RayleighParams) -> Result<f64> {
    check_y(y)?;
    if y == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    let sigma = params.sigma();
    Ok(y.ln() - 2.0 * sigma.ln() - y * y / (2.0 * sigma * sigma))
}

/// Closed-form maximum-likelihood scale: `sqrt(sum(y^2) / (2 n))`.
pub fn estimate_rayleigh_scale(samples: &SampleVector) -> Result<RayleighParams> {
    if samples.is_empty() {
        return Err(Error::EmptyInput(
            "Rayleigh fit needs at least one sample".into(),
        ));
    }
    let sum_sq = neumaier_sum(samples.iter().map(|y| y * y));
    if sum_sq == 0.0 {
        return Err(Error::degenerate(
            "all samples are zero; Rayleigh scale would be 0",
        ));
    }
    RayleighParams::new((sum_sq / (2.0 * samples.len() as f64)).sqrt())
}
