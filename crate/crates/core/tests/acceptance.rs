//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! cargo test --release --test acceptance

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fiberthresh::channel::stream_rng;
use fiberthresh::distfit::{
    estimate_rayleigh_scale, fit_best, rayleigh_pdf, rician_pdf, Family, RayleighParams,
    RicianParams, SampleVector,
};
use fiberthresh::harness::{
    run_trial, spearman, sweep_epsilon, sweep_separation, EpsilonPolicy, SweepTable,
};
use fiberthresh::LinkConfig;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rayleigh_draws(rng: &mut ChaCha8Rng, sigma: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| sigma * (-2.0 * (1.0 - rng.random::<f64>()).ln()).sqrt())
        .collect()
}

fn rician_draws(rng: &mut ChaCha8Rng, sigma: f64, s: f64, n: usize) -> Vec<f64> {
    // envelope of a complex Gaussian, Box-Muller for the two components
    (0..n)
        .map(|_| {
            let u1: f64 = 1.0 - rng.random::<f64>();
            let u2: f64 = rng.random();
            let r = (-2.0 * u1.ln()).sqrt();
            let (sin, cos) = (2.0 * std::f64::consts::PI * u2).sin_cos();
            (s + sigma * r * cos).hypot(sigma * r * sin)
        })
        .collect()
}

/// Rayleigh log-likelihood maximised by successive grid refinement.
fn grid_search_sigma(y: &[f64]) -> f64 {
    let loglik = |sigma: f64| {
        y.iter()
            .map(|&v| (v / (sigma * sigma)).ln() - v * v / (2.0 * sigma * sigma))
            .sum::<f64>()
    };
    let max = y.iter().copied().fold(0.0, f64::max);
    let (mut lo, mut hi) = (max * 1e-3, max);
    let mut best = lo;
    for _ in 0..40 {
        let step = (hi - lo) / 100.0;
        let mut best_ll = f64::NEG_INFINITY;
        for i in 0..=100 {
            let sigma = lo + step * i as f64;
            let ll = loglik(sigma);
            if ll > best_ll {
                best_ll = ll;
                best = sigma;
            }
        }
        lo = (best - step).max(f64::MIN_POSITIVE);
        hi = best + step;
        if step < best * 1e-12 {
            break;
        }
    }
    best
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let sigmas = [1.0, 7.0, 31.4];
    let mut worst: f64 = 0.0;
    for k in 0..20u64 {
        let sigma = sigmas[k as usize % 3];
        let y = rayleigh_draws(&mut stream_rng(1000 + k, 7), sigma, 10_000);
        let closed = estimate_rayleigh_scale(&SampleVector::new(y.clone()).unwrap())
            .unwrap()
            .sigma();
        let oracle = grid_search_sigma(&y);
        worst = worst.max(((closed - oracle) / oracle).abs());
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 1e-6 && elapsed < Duration::from_secs(5),
        format!("max relative deviation {worst:.2e} over 20 sets, {elapsed:.2?}"),
    )
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, intervals: usize) -> f64 {
    let h = (b - a) / intervals as f64;
    let mut sum = f(a) + f(b);
    for i in 1..intervals {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + h * i as f64);
    }
    sum * h / 3.0
}

fn criterion_2() -> Outcome {
    let mut worst: f64 = 0.0;
    for &sigma in &[0.5, 1.0, 3.0] {
        let r = RayleighParams::new(sigma).unwrap();
        let upper = 40.0 * sigma;
        let area = simpson(|y| rayleigh_pdf(y, &r).unwrap(), 0.0, upper, 200_000);
        worst = worst.max((area - 1.0).abs());
        for &s in &[0.0, 2.0, 10.0] {
            let p = RicianParams::new(sigma, s).unwrap();
            let area = simpson(|y| rician_pdf(y, &p).unwrap(), 0.0, s + upper, 200_000);
            worst = worst.max((area - 1.0).abs());
        }
    }
    outcome(worst <= 1e-6, format!("max |integral - 1| = {worst:.2e}"))
}

fn criterion_3() -> Outcome {
    let mut worst: f64 = 0.0;
    for &sigma in &[0.1, 0.5, 1.0, 3.0, 31.4] {
        let r = RayleighParams::new(sigma).unwrap();
        let p = RicianParams::new(sigma, 0.0).unwrap();
        for i in 0..=4000 {
            let y = i as f64 * sigma * 0.005;
            worst = worst.max((rician_pdf(y, &p).unwrap() - rayleigh_pdf(y, &r).unwrap()).abs());
        }
    }
    outcome(
        worst <= 1e-12,
        format!("max pointwise difference {worst:.2e}"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let picks = |family: Family, seed_base: u64| -> usize {
        (0..100u64)
            .into_par_iter()
            .filter(|&k| {
                let mut rng = stream_rng(seed_base + k, 3);
                let y = match family {
                    Family::Rayleigh => rayleigh_draws(&mut rng, 5.0, 5000),
                    Family::Rician => rician_draws(&mut rng, 2.0, 10.0, 5000),
                };
                let sel = fit_best(&SampleVector::new(y).unwrap(), &Family::ALL).unwrap();
                sel.best.family == family
            })
            .count()
    };
    let rayleigh = picks(Family::Rayleigh, 5000);
    let rician = picks(Family::Rician, 6000);
    let elapsed = start.elapsed();
    outcome(
        rayleigh >= 95 && rician >= 95 && elapsed < Duration::from_secs(20),
        format!("Rayleigh recovered {rayleigh}/100, Rician(s=10, sigma=2) recovered {rician}/100, {elapsed:.2?}"),
    )
}

fn criterion_5() -> Outcome {
    let picks = (0..100u64)
        .into_par_iter()
        .filter(|&seed| {
            let cfg = LinkConfig {
                n_bits: 100_000,
                rng_seed: seed,
                ..LinkConfig::default()
            };
            let rx = fiberthresh::channel::transmit(&cfg).unwrap().rx_samples;
            fit_best(&rx, &Family::ALL).unwrap().best.family == Family::Rayleigh
        })
        .count();
    outcome(
        picks >= 90,
        format!("Rayleigh selected on {picks}/100 seeds"),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let grid: Vec<f64> = (0..=30).map(f64::from).collect();
    let policy = EpsilonPolicy::Tuned(grid);
    let bers: Vec<f64> = (0..100u64)
        .into_par_iter()
        .map(|seed| {
            let cfg = LinkConfig {
                n_bits: 100_000,
                rng_seed: seed,
                ..LinkConfig::default().with_separation(70.0)
            };
            fiberthresh::harness::run_trial_with(&cfg, &policy)
                .unwrap()
                .ber
        })
        .collect();
    let good = bers.iter().filter(|&&b| b <= 1e-4).count();
    let worst = bers.iter().copied().fold(0.0, f64::max);
    let elapsed = start.elapsed();
    outcome(
        good >= 95 && elapsed < Duration::from_secs(30),
        format!("BER <= 1e-4 on {good}/100 seeds (worst {worst:.1e}), {elapsed:.2?}"),
    )
}

const P1_LIST: [f64; 3] = [0.5, 0.9, 0.3];

fn separation_table() -> (SweepTable, Duration) {
    let start = Instant::now();
    let table = sweep_separation(
        &LinkConfig::default(),
        &[30.0, 40.0, 50.0, 60.0, 70.0, 80.0],
        &P1_LIST,
        &EpsilonPolicy::Fixed(0.0),
        50,
    )
    .unwrap();
    (table, start.elapsed())
}

fn criterion_7(table: &SweepTable, elapsed: Duration) -> Outcome {
    let mut pass = elapsed < Duration::from_secs(60);
    let mut parts = Vec::new();
    for p1 in P1_LIST {
        let (seps, bers): (Vec<f64>, Vec<f64>) = table.curve(p1).into_iter().unzip();
        let rho = spearman(&seps, &bers);
        pass &= rho.is_some_and(|r| r <= -0.9);
        parts.push(format!(
            "p1={p1}: rho={}",
            rho.map_or("undefined".into(), |r| format!("{r:.3}"))
        ));
    }
    outcome(pass, format!("{}, {elapsed:.2?}", parts.join(", ")))
}

fn criterion_8(table: &SweepTable) -> Outcome {
    let at50 = |p1: f64| {
        table
            .curve(p1)
            .into_iter()
            .find(|&(s, _)| s == 50.0)
            .unwrap()
            .1
    };
    let (b9, b5, b3) = (at50(0.9), at50(0.5), at50(0.3));
    outcome(
        b9 <= b5 && b5 <= b3,
        format!("mean BER at separation 50: p1=0.9 {b9:.3e}, p1=0.5 {b5:.3e}, p1=0.3 {b3:.3e}"),
    )
}

fn criterion_9() -> Outcome {
    let range = |sep: f64, grid: &[f64]| {
        let table = sweep_epsilon(&LinkConfig::default().with_separation(sep), grid, 50).unwrap();
        let bers: Vec<f64> = table.rows.iter().map(|r| r.mean_ber).collect();
        let max = bers.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = bers.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    };
    let r50 = range(50.0, &[0.0, 10.0, 15.0, 20.0]);
    let r70 = range(70.0, &[0.0, 10.0, 20.0, 25.0]);
    outcome(
        r50 > r70,
        format!("BER range over epsilon grid: separation 50 {r50:.3e}, separation 70 {r70:.3e}"),
    )
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fiberthresh"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn criterion_10(dir: &Path) -> Outcome {
    let p = |name: &str| dir.join(name).to_string_lossy().into_owned();
    let config = p("link.conf");
    fs::write(
        &config,
        "p1 = 0.5\nlevel0 = 0\nlevel1 = 70\nn_bits = 20000\nrng_seed = 42\nepsilon = 25\n",
    )
    .unwrap();

    let mut identical = true;
    for (cmd, a, b) in [
        ("simulate", "sim_a.csv", "sim_b.csv"),
        ("sweep-eps", "eps_a.csv", "eps_b.csv"),
        ("hist", "h_a.csv", "h_b.csv"),
    ] {
        for out in [a, b] {
            let (code, _) = cli(&[
                cmd,
                "--config",
                &config,
                "--set",
                "trials=3",
                "--output",
                &p(out),
            ]);
            identical &= code == 0;
        }
        identical &= fs::read(p(a)).ok() == fs::read(p(b)).ok();
    }

    let (fit_code, _) = cli(&[
        "fit",
        "--input",
        &p("sim_a.csv"),
        "--output",
        &p("fit.json"),
    ]);
    let (detect_code, summary) = cli(&[
        "detect",
        "--config",
        &config,
        "--input",
        &p("sim_a.csv"),
        "--truth",
        &p("sim_a.csv"),
        "--output",
        &p("bits.txt"),
    ]);
    let cfg = LinkConfig {
        level1: 70.0,
        n_bits: 20_000,
        ..LinkConfig::default()
    };
    let report = run_trial(&cfg, 25.0).unwrap();
    let expected = format!(
        "n_bits={} n_errors={} ber={} tau={}",
        report.n_bits,
        report.n_errors,
        report.ber,
        report.threshold_used.tau()
    );
    let round_trip = fit_code == 0 && detect_code == 0 && summary.lines().any(|l| l == expected);
    outcome(
        identical && round_trip,
        format!(
            "byte-identical reruns: {identical}; CLI round trip matches run_trial: {round_trip} ({expected})"
        ),
    )
}

fn main() {
    let start = Instant::now();
    let dir = tempfile::tempdir().expect("temp dir");
    let mut results: Vec<(u32, Outcome)> = Vec::new();
    let mut record = |n: u32, o: Outcome| {
        println!(
            "criterion {n:>2}: {} | {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((n, o));
    };

    record(1, criterion_1());
    record(2, criterion_2());
    record(3, criterion_3());
    record(4, criterion_4());
    record(5, criterion_5());
    record(6, criterion_6());
    let (table, elapsed) = separation_table();
    record(7, criterion_7(&table, elapsed));
    record(8, criterion_8(&table));
    record(9, criterion_9());
    record(10, criterion_10(dir.path()));
    let total = start.elapsed();
    record(
        11,
        outcome(
            total < Duration::from_secs(180),
            format!("suite finished in {total:.2?}"),
        ),
    );

    let failed: Vec<u32> = results
        .iter()
        .filter(|(_, o)| !o.pass)
        .map(|(n, _)| *n)
        .collect();
    if failed.is_empty() {
        println!("acceptance: all 11 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
