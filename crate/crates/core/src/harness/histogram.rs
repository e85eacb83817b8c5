use std::fmt::Write as _;

use crate::detector::Threshold;
use crate::distfit::SampleVector;
use crate::error::{Error, Result};

/// Number of bins used when no bin width is given.
pub const DEFAULT_BIN_COUNT: usize = 60;

/// Binning of a histogram. Unset fields are taken from the data:
/// the range defaults to `[min, max]` of the samples and the bin width
/// to `(max - min) / 60`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct HistogramSpec {
    pub bin_width: Option<f64>,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl HistogramSpec {
    pub fn new(bin_width: f64, min: f64, max: f64) -> Self {
        HistogramSpec {
            bin_width: Some(bin_width),
            min: Some(min),
            max: Some(max),
        }
    }

    /// Concrete `(bin_width, min, max)` for `samples`.
    pub fn resolve(&self, samples: &[f64]) -> Result<(f64, f64, f64)> {
        let data_min = samples.iter().copied().reduce(f64::min);
        let data_max = samples.iter().copied().reduce(f64::max);
        let min = match (self.min, data_min) {
            (Some(m), _) | (None, Some(m)) => m,
            (None, None) => {
                return Err(Error::config(
                    "hist_min",
                    "no samples to infer the range from",
                ))
            }
        };
        let max = match (self.max, data_max) {
            (Some(m), _) | (None, Some(m)) => m,
            (None, None) => {
                return Err(Error::config(
                    "hist_max",
                    "no samples to infer the range from",
                ))
            }
        };
        if !min.is_finite() || !max.is_finite() || max < min {
            return Err(Error::config(
                "hist_max",
                format!("invalid range [{min}, {max}]"),
            ));
        }
        let width = match self.bin_width {
            Some(w) => w,
            None if max > min => (max - min) / DEFAULT_BIN_COUNT as f64,
            None => 1.0,
        };
        if !(width > 0.0) || !width.is_finite() {
            return Err(Error::config(
                "bin_width",
                format!("must be positive, got {width}"),
            ));
        }
        Ok((width, min, max))
    }
}

/// Bin counts of the received signal with the decision threshold overlaid.
///
/// Bins are `[left, right)` except the last, which also holds samples equal
/// to the range maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub out_of_range: u64,
    pub tau: f64,
}

impl Histogram {
    pub const HEADER: &'static str = "bin_left,bin_right,count";

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# tau={}\n{}\n", self.tau, Self::HEADER);
        for (i, count) in self.counts.iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", self.edges[i], self.edges[i + 1], count);
        }
        out
    }
}

pub fn histogram(
    samples: &SampleVector,
    spec: &HistogramSpec,
    threshold: &Threshold,
) -> Result<Histogram> {
    let (width, min, max) = spec.resolve(samples)?;
    let n_bins = ((max - min) / width - 1e-9).ceil().max(1.0) as usize;
    let mut edges: Vec<f64> = (0..n_bins).map(|i| min + i as f64 * width).collect();
    edges.push(if max > min { max } else { min + width });

    let mut counts = vec![0u64; n_bins];
    let mut out_of_range = 0u64;
    for &y in samples.iter() {
        if y < min || y > max {
            out_of_range += 1;
            continue;
        }
        let mut bin = (((y - min) / width) as usize).min(n_bins - 1);
        // the division can land one bin off next to an edge
        if y < edges[bin] {
            bin -= 1;
        } else if bin + 1 < n_bins && y >= edges[bin + 1] {
            bin += 1;
        }
        counts[bin] += 1;
    }
    Ok(Histogram {
        edges,
        counts,
        out_of_range,
        tau: threshold.tau(),
    })
}
