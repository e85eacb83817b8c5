//! Parametric fitting of received photo-voltage samples.
//!
//! Two families are supported, Rayleigh (one parameter) and Rician (two);
//! each is fitted by maximum likelihood and the candidates are ranked by the
//! Bayesian information criterion `k ln(n) - 2 ln L`.

pub mod bessel;
mod rayleigh;
mod rician;

use std::fmt;
use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};

pub use bessel::{bessel_i0, bessel_i0e, bessel_i1, bessel_i1e, log_bessel_i0};
pub use rayleigh::{estimate_rayleigh_scale, rayleigh_ln_pdf, rayleigh_pdf};
pub use rician::{estimate_rician_params, rician_ln_pdf, rician_pdf, RICIAN_MAX_ITER, RICIAN_TOL};

/// Nonnegative, finite received samples.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SampleVector(Vec<f64>);

impl SampleVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::domain(format!(
                "sample {i} is {v}; samples must be finite and >= 0"
            )));
        }
        Ok(SampleVector(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Every sample multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain(format!("scale factor must be > 0, got {c}")));
        }
        SampleVector::new(self.0.iter().map(|v| v * c).collect())
    }

    pub fn mean(&self) -> Option<f64> {
        if self.0.is_empty() {
            None
        } else {
            Some(neumaier_sum(self.0.iter().copied()) / self.0.len() as f64)
        }
    }
}

impl Deref for SampleVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for SampleVector {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        SampleVector::new(values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    Rayleigh,
    Rician,
}

impl Family {
    pub const ALL: [Family; 2] = [Family::Rayleigh, Family::Rician];

    /// Free parameters, the `k` of BIC.
    pub fn n_params(self) -> usize {
        match self {
            Family::Rayleigh => 1,
            Family::Rician => 2,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Rayleigh => "Rayleigh",
            Family::Rician => "Rician",
        })
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rayleigh" => Ok(Family::Rayleigh),
            "rician" | "rice" => Ok(Family::Rician),
            other => Err(Error::domain(format!("unknown family `{other}`"))),
        }
    }
}

/// Rayleigh scale, `sigma > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RayleighParams {
    sigma: f64,
}

impl RayleighParams {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain(format!(
                "Rayleigh sigma must be > 0, got {sigma}"
            )));
        }
        Ok(RayleighParams { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Rician scale `sigma > 0` and non-centrality `s >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RicianParams {
    sigma: f64,
    s: f64,
}

impl RicianParams {
    pub fn new(sigma: f64, s: f64) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::domain(format!(
                "Rician sigma must be > 0, got {sigma}"
            )));
        }
        if !(s >= 0.0) || !s.is_finite() {
            return Err(Error::domain(format!("Rician s must be >= 0, got {s}")));
        }
        Ok(RicianParams { sigma, s })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn s(&self) -> f64 {
        self.s
    }
}

/// A fitted (or hypothesised) member of one of the supported families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Params {
    Rayleigh(RayleighParams),
    Rician(RicianParams),
}

impl Params {
    pub fn family(&self) -> Family {
        match self {
            Params::Rayleigh(_) => Family::Rayleigh,
            Params::Rician(_) => Family::Rician,
        }
    }

    pub fn sigma(&self) -> f64 {
        match self {
            Params::Rayleigh(p) => p.sigma(),
            Params::Rician(p) => p.sigma(),
        }
    }

    /// Non-centrality; zero for Rayleigh.
    pub fn s(&self) -> f64 {
        match self {
            Params::Rayleigh(_) => 0.0,
            Params::Rician(p) => p.s(),
        }
    }

    pub fn pdf(&self, y: f64) -> Result<f64> {
        match self {
            Params::Rayleigh(p) => rayleigh_pdf(y, p),
            Params::Rician(p) => rician_pdf(y, p),
        }
    }

    pub fn ln_pdf(&self, y: f64) -> Result<f64> {
        match self {
            Params::Rayleigh(p) => rayleigh_ln_pdf(y, p),
            Params::Rician(p) => rician_ln_pdf(y, p),
        }
    }
}

impl From<RayleighParams> for Params {
    fn from(p: RayleighParams) -> Self {
        Params::Rayleigh(p)
    }
}

impl From<RicianParams> for Params {
    fn from(p: RicianParams) -> Self {
        Params::Rician(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub family: Family,
    pub params: Params,
    pub log_likelihood: f64,
    pub bic: f64,
    /// Number of samples the fit used.
    pub n: usize,
}

/// Outcome of [`fit_best`]: the winner plus what happened to every candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSelection {
    pub best: FitResult,
    /// Every successful fit, in ascending BIC order.
    pub candidates: Vec<FitResult>,
    /// Families whose estimator raised.
    pub skipped: Vec<(Family, Error)>,
    /// Exact zeros left out of the fit (zero density under both families).
    pub zeros_excluded: usize,
}

// Compensated summation; a -inf term short-circuits instead of producing NaN.
pub(crate) fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for v in values {
        if v == f64::NEG_INFINITY {
            return f64::NEG_INFINITY;
        }
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// `sum_i ln pdf(y_i)`.
///
/// Zero samples have zero density under both families and contribute
/// `-inf`; the result is then exactly `f64::NEG_INFINITY`, never NaN.
pub fn log_likelihood(params: &Params, samples: &SampleVector) -> f64 {
    neumaier_sum(samples.iter().map(|&y| {
        // SampleVector guarantees y >= 0, so ln_pdf cannot fail
        params.ln_pdf(y).unwrap_or(f64::NAN)
    }))
}

/// Bayesian information criterion, `k ln(n) - 2 ln L`. Lower is better.
pub fn bic(log_likelihood: f64, k: usize, n: usize) -> Result<f64> {
    if !log_likelihood.is_finite() {
        return Err(Error::domain(format!(
            "BIC needs a finite log-likelihood, got {log_likelihood}"
        )));
    }
    if k == 0 || n == 0 {
        return Err(Error::domain(format!(
            "BIC needs k >= 1 and n >= 1 (k={k}, n={n})"
        )));
    }
    Ok(k as f64 * (n as f64).ln() - 2.0 * log_likelihood)
}

/// Fit one family by maximum likelihood and score it.
pub fn fit_family(family: Family, samples: &SampleVector) -> Result<FitResult> {
    let params: Params = match family {
        Family::Rayleigh => estimate_rayleigh_scale(samples)?.into(),
        Family::Rician => estimate_rician_params(samples)?.into(),
    };
    let ll = log_likelihood(&params, samples);
    let score = bic(ll, family.n_params(), samples.len())
        .map_err(|_| Error::degenerate(format!("{family} fit has non-finite log-likelihood")))?;
    Ok(FitResult {
        family,
        params,
        log_likelihood: ll,
        bic: score,
        n: samples.len(),
    })
}

/// Fit every requested family and return the one with the lowest BIC.
///
/// Exact zeros are dropped first (see [`ModelSelection::zeros_excluded`]).
/// Ties go to the family with fewer parameters.
pub fn fit_best(samples: &SampleVector, families: &[Family]) -> Result<ModelSelection> {
    if families.is_empty() {
        return Err(Error::domain("no candidate families given"));
    }
    let mut wanted = families.to_vec();
    wanted.sort();
    wanted.dedup();

    let positive: Vec<f64> = samples.iter().copied().filter(|&y| y > 0.0).collect();
    let zeros_excluded = samples.len() - positive.len();
    let positive = SampleVector(positive);

    let mut candidates = Vec::new();
    let mut skipped = Vec::new();
    for family in wanted {
        match fit_family(family, &positive) {
            Ok(fit) => candidates.push(fit),
            Err(e) => skipped.push((family, e)),
        }
    }
    candidates.sort_by(|a, b| {
        a.bic
            .total_cmp(&b.bic)
            .then(a.family.n_params().cmp(&b.family.n_params()))
    });
    let best = candidates.first().cloned().ok_or_else(|| {
        let reasons: Vec<String> = skipped.iter().map(|(f, e)| format!("{f}: {e}")).collect();
        Error::NoFit(reasons.join("; "))
    })?;
    Ok(ModelSelection {
        best,
        candidates,
        skipped,
        zeros_excluded,
    })
}
