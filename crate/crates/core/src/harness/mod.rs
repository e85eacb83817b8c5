//! Experiment orchestration: BER evaluation, single trials, `epsilon` and
//! separation sweeps, histograms of the received signal.
//!
//! Trial `t` of a sweep runs with seed `base_seed ^ t`; the same trial seeds
//! are used for every row, so rows differ only in the swept parameter.
//! Trials run on the rayon pool and are aggregated in index order, so the
//! tables do not depend on the number of threads.

mod histogram;
mod sweep;

use std::fmt;

use crate::channel::{transmit, LinkConfig};
use crate::detector::{
    adapt_threshold, compute_threshold, count_errors, detect_stream, tune_epsilon, DetectedBits,
    Threshold,
};
use crate::distfit::{estimate_rayleigh_scale, SampleVector};
use crate::error::{Error, Result};

pub use histogram::{histogram, Histogram, HistogramSpec, DEFAULT_BIN_COUNT};
pub use sweep::{spearman, sweep_epsilon, sweep_separation, SweepRow, SweepTable};

/// Error counts of a detected block against its ground truth.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitErrors {
    pub n_bits: usize,
    pub n_errors: usize,
    pub ber: f64,
}

impl BitErrors {
    fn new(n_bits: usize, n_errors: usize) -> Self {
        BitErrors {
            n_bits,
            n_errors,
            ber: n_errors as f64 / n_bits as f64,
        }
    }
}

/// Outcome of one simulated trial.
#[derive(Debug, Clone, PartialEq)]
pub struct BerReport {
    pub n_bits: usize,
    pub n_errors: usize,
    pub ber: f64,
    pub threshold_used: Threshold,
    pub config_echo: LinkConfig,
}

/// How a trial chooses `epsilon`.
#[derive(Debug, Clone, PartialEq)]
pub enum EpsilonPolicy {
    Fixed(f64),
    /// Per trial, the grid value with the fewest errors against the known
    /// transmitted bits (smallest value on ties).
    Tuned(Vec<f64>),
}

impl fmt::Display for EpsilonPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonPolicy::Fixed(eps) => write!(f, "{eps}"),
            EpsilonPolicy::Tuned(_) => f.write_str("tuned"),
        }
    }
}

/// Sub-seed of trial `index`.
pub fn trial_seed(base_seed: u64, index: usize) -> u64 {
    base_seed ^ index as u64
}

pub fn evaluate_ber(truth: &[bool], detected: &DetectedBits) -> Result<BitErrors> {
    if truth.len() != detected.len() {
        return Err(Error::LengthMismatch {
            expected: truth.len(),
            actual: detected.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::EmptyInput("no bits to compare".into()));
    }
    let n_errors = truth
        .iter()
        .zip(detected.as_slice())
        .filter(|(t, d)| t != d)
        .count();
    Ok(BitErrors::new(truth.len(), n_errors))
}

fn report(config: &LinkConfig, threshold: Threshold, errors: BitErrors) -> BerReport {
    BerReport {
        n_bits: errors.n_bits,
        n_errors: errors.n_errors,
        ber: errors.ber,
        threshold_used: threshold,
        config_echo: config.clone(),
    }
}

/// Simulate, fit the threshold on the pooled received block, detect and count.
pub fn run_trial(config: &LinkConfig, epsilon: f64) -> Result<BerReport> {
    run_trial_with(config, &EpsilonPolicy::Fixed(epsilon))
}

pub fn run_trial_with(config: &LinkConfig, policy: &EpsilonPolicy) -> Result<BerReport> {
    let record = transmit(config)?;
    let epsilon = match policy {
        EpsilonPolicy::Fixed(eps) => *eps,
        EpsilonPolicy::Tuned(grid) => tune_epsilon(&record.rx_samples, &record.bits, grid)?,
    };
    let threshold = adapt_threshold(&record.rx_samples, epsilon)?;
    let detected = detect_stream(&record.rx_samples, &threshold);
    let errors = evaluate_ber(&record.bits, &detected)?;
    Ok(report(config, threshold, errors))
}

/// Like [`run_trial`], but the threshold is fitted on the leading
/// `train_fraction` of the block and the BER is measured on the remainder.
pub fn run_trial_split(
    config: &LinkConfig,
    epsilon: f64,
    train_fraction: f64,
) -> Result<BerReport> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::domain(format!(
            "train_fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    let record = transmit(config)?;
    let n_train = (record.bits.len() as f64 * train_fraction).round() as usize;
    if n_train == 0 || n_train == record.bits.len() {
        return Err(Error::degenerate(format!(
            "train_fraction {train_fraction} leaves an empty part of {} bits",
            record.bits.len()
        )));
    }
    let (train, test) = record.rx_samples.split_at(n_train);
    let threshold = adapt_threshold(&SampleVector::new(train.to_vec())?, epsilon)?;
    let detected = detect_stream(&SampleVector::new(test.to_vec())?, &threshold);
    let errors = evaluate_ber(&record.bits[n_train..], &detected)?;
    Ok(report(config, threshold, errors))
}

/// BER of one block for each `epsilon`, sharing one transmission and one fit.
fn trial_bers(config: &LinkConfig, epsilons: &[f64]) -> Result<Vec<f64>> {
    let record = transmit(config)?;
    let sigma = estimate_rayleigh_scale(&record.rx_samples)?.sigma();
    epsilons
        .iter()
        .map(|&eps| {
            let tau = compute_threshold(sigma, eps)?.tau();
            let errors = count_errors(&record.bits, &record.rx_samples, tau);
            Ok(errors as f64 / record.bits.len() as f64)
        })
        .collect()
}
