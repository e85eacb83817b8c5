//! Decision thresholds and the binary detection rule.
//!
//! The adaptive threshold is `tau = sigma + epsilon`, with `sigma` the
//! Rayleigh maximum-likelihood scale of the pooled received block and
//! `epsilon >= 0` an empirical offset. A sample decodes to `1` when
//! `y >= tau` (the boundary belongs to `1`) and to `0` otherwise.

use crate::distfit::{estimate_rayleigh_scale, SampleVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    sigma: f64,
    epsilon: f64,
    tau: f64,
}

impl Threshold {
    /// An externally chosen decision level (baselines, fixed-threshold
    /// receivers). Reported with `sigma = tau`, `epsilon = 0`.
    pub fn fixed(tau: f64) -> Result<Self> {
        if !(tau >= 0.0) || !tau.is_finite() {
            return Err(Error::domain(format!(
                "threshold must be finite and >= 0, got {tau}"
            )));
        }
        Ok(Threshold {
            sigma: tau,
            epsilon: 0.0,
            tau,
        })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// The same threshold in units scaled by `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::domain(format!("scale factor must be > 0, got {c}")));
        }
        Ok(Threshold {
            sigma: self.sigma * c,
            epsilon: self.epsilon * c,
            tau: self.tau * c,
        })
    }
}

/// Hard decisions, one per received sample.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DetectedBits(Vec<bool>);

impl DetectedBits {
    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<bool> {
        self.0
    }
}

impl From<Vec<bool>> for DetectedBits {
    fn from(bits: Vec<bool>) -> Self {
        DetectedBits(bits)
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon >= 0.0) || !epsilon.is_finite() {
        return Err(Error::domain(format!(
            "epsilon must be finite and >= 0, got {epsilon}"
        )));
    }
    Ok(())
}

/// `tau = sigma + epsilon`.
pub fn compute_threshold(sigma: f64, epsilon: f64) -> Result<Threshold> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::domain(format!("sigma must be > 0, got {sigma}")));
    }
    check_epsilon(epsilon)?;
    Ok(Threshold {
        sigma,
        epsilon,
        tau: sigma + epsilon,
    })
}

pub fn detect_bit(y: f64, threshold: &Threshold) -> Result<bool> {
    if y.is_nan() || y < 0.0 {
        return Err(Error::domain(format!(
            "received sample must be >= 0, got {y}"
        )));
    }
    Ok(y >= threshold.tau)
}

pub fn detect_stream(samples: &SampleVector, threshold: &Threshold) -> DetectedBits {
    DetectedBits(samples.iter().map(|&y| y >= threshold.tau).collect())
}

/// Fit the Rayleigh scale to the pooled block and offset it by `epsilon`.
pub fn adapt_threshold(samples: &SampleVector, epsilon: f64) -> Result<Threshold> {
    check_epsilon(epsilon)?;
    let sigma = estimate_rayleigh_scale(samples)?.sigma();
    compute_threshold(sigma, epsilon)
}

/// Halfway between the two transmit levels; the textbook choice for
/// equiprobable symbols when the levels are known.
pub fn baseline_midpoint_threshold(level0: f64, level1: f64) -> Result<f64> {
    if !(level0 >= 0.0) || !(level1 > level0) || !level1.is_finite() {
        return Err(Error::domain(format!(
            "need 0 <= level0 < level1, got level0={level0}, level1={level1}"
        )));
    }
    Ok((level0 + level1) / 2.0)
}

/// Midpoint of the per-symbol empirical means. Needs labelled samples.
pub fn baseline_mean_threshold(samples0: &SampleVector, samples1: &SampleVector) -> Result<f64> {
    let m0 = samples0
        .mean()
        .ok_or_else(|| Error::EmptyInput("no samples for symbol 0".into()))?;
    let m1 = samples1
        .mean()
        .ok_or_else(|| Error::EmptyInput("no samples for symbol 1".into()))?;
    Ok((m0 + m1) / 2.0)
}

pub(crate) fn count_errors(truth: &[bool], samples: &[f64], tau: f64) -> usize {
    truth
        .iter()
        .zip(samples)
        .filter(|(&bit, &y)| (y >= tau) != bit)
        .count()
}

/// Pick the grid value of `epsilon` that minimises the bit errors of the
/// adaptive threshold on a labelled block. Ties go to the smallest `epsilon`.
pub fn tune_epsilon(samples: &SampleVector, truth: &[bool], grid: &[f64]) -> Result<f64> {
    if truth.len() != samples.len() {
        return Err(Error::LengthMismatch {
            expected: samples.len(),
            actual: truth.len(),
        });
    }
    if grid.is_empty() {
        return Err(Error::EmptyInput("epsilon grid is empty".into()));
    }
    for &eps in grid {
        check_epsilon(eps)?;
    }
    let sigma = estimate_rayleigh_scale(samples)?.sigma();
    let mut best: Option<(usize, f64)> = None;
    for &eps in grid {
        let errors = count_errors(truth, samples, sigma + eps);
        best = match best {
            Some((e, b)) if e < errors || (e == errors && b <= eps) => Some((e, b)),
            _ => Some((errors, eps)),
        };
    }
    Ok(best.map(|(_, eps)| eps).unwrap_or_default())
}

/// `0..=30` in steps of 1.
pub fn default_epsilon_grid() -> Vec<f64> {
    (0..=30).map(f64::from).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(v: &[f64]) -> SampleVector {
        SampleVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn threshold_arithmetic() {
        assert_eq!(compute_threshold(5.0, 10.0).unwrap().tau(), 15.0);
        assert_eq!(compute_threshold(5.0, 0.0).unwrap().tau(), 5.0);
        assert!((compute_threshold(31.4, 20.0).unwrap().tau() - 51.4).abs() < 1e-12);
        assert!(compute_threshold(0.0, 1.0).is_err());
        assert!(compute_threshold(-1.0, 1.0).is_err());
        assert!(compute_threshold(1.0, -1.0).is_err());
    }

    #[test]
    fn boundary_decodes_to_one() {
        let t = compute_threshold(5.0, 2.5).unwrap();
        assert!(detect_bit(t.tau(), &t).unwrap());
        assert!(!detect_bit(0.0, &t).unwrap());
        let t = Threshold::fixed(51.39).unwrap();
        assert!(detect_bit(51.4, &t).unwrap());
        assert!(detect_bit(-1.0, &t).is_err());
    }

    #[test]
    fn stream_detection() {
        let t = Threshold::fixed(5.0).unwrap();
        let bits = detect_stream(&sv(&[1.0, 2.0, 8.0, 9.0]), &t);
        assert_eq!(bits.as_slice(), &[false, false, true, true]);
        assert!(detect_stream(&SampleVector::default(), &t).is_empty());
        let zero = Threshold::fixed(0.0).unwrap();
        assert!(detect_stream(&sv(&[0.0, 3.0, 0.1]), &zero)
            .as_slice()
            .iter()
            .all(|&b| b));
    }

    #[test]
    fn adaptive_threshold_chains_the_scale_estimate() {
        assert_eq!(adapt_threshold(&sv(&[3.0, 4.0]), 0.0).unwrap().tau(), 2.5);
        assert_eq!(adapt_threshold(&sv(&[3.0, 4.0]), 1.5).unwrap().tau(), 4.0);
        let c = 3.7;
        let a = adapt_threshold(&sv(&[3.0, 4.0, 0.5]), 1.5).unwrap();
        let b = adapt_threshold(&sv(&[3.0 * c, 4.0 * c, 0.5 * c]), 1.5 * c).unwrap();
        assert!((b.tau() - c * a.tau()).abs() < 1e-12 * b.tau());
        assert!(matches!(
            adapt_threshold(&sv(&[0.0, 0.0]), 1.0),
            Err(Error::DegenerateData(_))
        ));
    }

    #[test]
    fn baselines() {
        assert_eq!(baseline_midpoint_threshold(10.0, 60.0).unwrap(), 35.0);
        assert_eq!(baseline_midpoint_threshold(0.0, 50.0).unwrap(), 25.0);
        assert_eq!(baseline_midpoint_threshold(10.0, 80.0).unwrap(), 45.0);
        assert!(baseline_midpoint_threshold(10.0, 10.0).is_err());
        assert!(baseline_midpoint_threshold(10.0, 5.0).is_err());

        assert_eq!(
            baseline_mean_threshold(&sv(&[2.0, 4.0]), &sv(&[10.0, 14.0])).unwrap(),
            7.5
        );
        assert_eq!(
            baseline_mean_threshold(&sv(&[3.0, 5.0]), &sv(&[3.0, 5.0])).unwrap(),
            4.0
        );
        assert_eq!(
            baseline_mean_threshold(&sv(&[0.0]), &sv(&[10.0])).unwrap(),
            5.0
        );
        assert!(matches!(
            baseline_mean_threshold(&SampleVector::default(), &sv(&[1.0])),
            Err(Error::EmptyInput(_))
        ));
    }

    #[test]
    fn tune_singleton_grid() {
        let s = sv(&[1.0, 9.0, 2.0]);
        assert_eq!(
            tune_epsilon(&s, &[false, true, false], &[7.0]).unwrap(),
            7.0
        );
    }

    #[test]
    fn tune_prefers_smallest_on_ties() {
        // sigma-hat = sqrt((4*1 + 4*400)/16) = 10.01..., below the gap (1, 20)
        let s = sv(&[1.0, 1.0, 1.0, 1.0, 20.0, 20.0, 20.0, 20.0]);
        let truth = [false, false, false, false, true, true, true, true];
        assert_eq!(tune_epsilon(&s, &truth, &[0.0, 9.0]).unwrap(), 0.0);
        assert_eq!(tune_epsilon(&s, &truth, &[9.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn tune_input_errors() {
        let s = sv(&[1.0, 2.0]);
        assert!(matches!(
            tune_epsilon(&s, &[true], &[0.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(tune_epsilon(&s, &[true, false], &[]).is_err());
        assert!(tune_epsilon(&s, &[true, false], &[-1.0]).is_err());
    }
}
