use std::fmt::Write as _;

use rayon::prelude::*;

use super::{run_trial_with, trial_bers, trial_seed, EpsilonPolicy};
use crate::channel::LinkConfig;
use crate::error::{Error, Result};

/// One cell of a sweep: the swept values, the per-trial outcomes and their mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub separation: f64,
    pub p1: f64,
    pub epsilon: EpsilonPolicy,
    pub trials: usize,
    pub mean_ber: f64,
    pub trial_bers: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl SweepRow {
    fn new(
        separation: f64,
        p1: f64,
        epsilon: EpsilonPolicy,
        bers: Vec<f64>,
        seeds: Vec<u64>,
    ) -> Self {
        let mean_ber = bers.iter().sum::<f64>() / bers.len() as f64;
        SweepRow {
            separation,
            p1,
            epsilon,
            trials: bers.len(),
            mean_ber,
            trial_bers: bers,
            seeds,
        }
    }

    /// Config of trial `index` of this row, derived from the sweep's base config.
    pub fn trial_config(&self, base: &LinkConfig, index: usize) -> LinkConfig {
        LinkConfig {
            p1: self.p1,
            rng_seed: self.seeds[index],
            ..base.with_separation(self.separation)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub const HEADER: &'static str = "separation,p1,epsilon,trials,mean_ber,seed_list";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for row in &self.rows {
            let seeds: Vec<String> = row.seeds.iter().map(u64::to_string).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                row.separation,
                row.p1,
                row.epsilon,
                row.trials,
                row.mean_ber,
                seeds.join(";")
            );
        }
        out
    }

    /// `(separation, mean_ber)` pairs of the rows with the given `p1`, in table order.
    pub fn curve(&self, p1: f64) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.p1 == p1)
            .map(|r| (r.separation, r.mean_ber))
            .collect()
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::config("trials", "must be >= 1"));
    }
    Ok(())
}

fn seeds(base: u64, trials: usize) -> Vec<u64> {
    (0..trials).map(|t| trial_seed(base, t)).collect()
}

/// Mean BER over `trials` for each `epsilon`, at the separation and `p1` of `config`.
pub fn sweep_epsilon(config: &LinkConfig, epsilons: &[f64], trials: usize) -> Result<SweepTable> {
    if epsilons.is_empty() {
        return Err(Error::config("epsilon_grid", "must not be empty"));
    }
    check_trials(trials)?;
    config.validate()?;
    let seeds = seeds(config.rng_seed, trials);
    let per_trial: Vec<Vec<f64>> = seeds
        .par_iter()
        .map(|&seed| {
            trial_bers(
                &LinkConfig {
                    rng_seed: seed,
                    ..config.clone()
                },
                epsilons,
            )
        })
        .collect::<Result<_>>()?;
    let rows = epsilons
        .iter()
        .enumerate()
        .map(|(i, &eps)| {
            let bers = per_trial.iter().map(|b| b[i]).collect();
            SweepRow::new(
                config.separation(),
                config.p1,
                EpsilonPolicy::Fixed(eps),
                bers,
                seeds.clone(),
            )
        })
        .collect();
    Ok(SweepTable { rows })
}

/// Mean BER over the grid `p1_list x separations` (rows grouped by `p1`),
/// with `level1 = base.level0 + separation`.
pub fn sweep_separation(
    base: &LinkConfig,
    separations: &[f64],
    p1_list: &[f64],
    policy: &EpsilonPolicy,
    trials: usize,
) -> Result<SweepTable> {
    if separations.is_empty() {
        return Err(Error::config("separations", "must not be empty"));
    }
    if separations.iter().any(|&s| !(s > 0.0)) || separations.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config(
            "separations",
            "must be positive and strictly ascending",
        ));
    }
    if p1_list.is_empty() {
        return Err(Error::config("p1_list", "must not be empty"));
    }
    check_trials(trials)?;
    let seeds = seeds(base.rng_seed, trials);

    let cells: Vec<(f64, f64)> = p1_list
        .iter()
        .flat_map(|&p1| separations.iter().map(move |&sep| (p1, sep)))
        .collect();
    for &(p1, sep) in &cells {
        LinkConfig {
            p1,
            ..base.with_separation(sep)
        }
        .validate()?;
    }

    let jobs: Vec<(usize, u64)> = (0..cells.len())
        .flat_map(|c| seeds.iter().map(move |&s| (c, s)))
        .collect();
    let bers: Vec<f64> = jobs
        .par_iter()
        .map(|&(c, seed)| {
            let (p1, sep) = cells[c];
            let cfg = LinkConfig {
                p1,
                rng_seed: seed,
                ..base.with_separation(sep)
            };
            run_trial_with(&cfg, policy).map(|r| r.ber)
        })
        .collect::<Result<_>>()?;

    let rows = cells
        .iter()
        .zip(bers.chunks(trials))
        .map(|(&(p1, sep), chunk)| {
            SweepRow::new(sep, p1, policy.clone(), chunk.to_vec(), seeds.clone())
        })
        .collect();
    Ok(SweepTable { rows })
}

fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties.
/// `None` for mismatched or too short inputs and for constant sequences.
pub fn spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
