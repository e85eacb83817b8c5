//! The adaptive threshold next to the two classical baselines.
//!
//! cargo run --example adaptive_threshold

use fiberthresh::channel::transmit;
use fiberthresh::detector::{
    adapt_threshold, baseline_mean_threshold, baseline_midpoint_threshold, detect_stream,
    tune_epsilon,
};
use fiberthresh::distfit::SampleVector;
use fiberthresh::harness::evaluate_ber;
use fiberthresh::LinkConfig;

fn main() -> fiberthresh::Result<()> {
    let config = LinkConfig {
        n_bits: 20_000,
        ..LinkConfig::default()
    };
    let record = transmit(&config)?;
    let rx = &record.rx_samples;

    let errors_at = |tau: f64| -> fiberthresh::Result<f64> {
        let t = fiberthresh::Threshold::fixed(tau)?;
        Ok(evaluate_ber(&record.bits, &detect_stream(rx, &t))?.ber)
    };

    let adaptive = adapt_threshold(rx, 0.0)?;
    println!(
        "adaptive (eps=0): sigma={:.3} tau={:.3} BER={:.5}",
        adaptive.sigma(),
        adaptive.tau(),
        errors_at(adaptive.tau())?
    );

    let grid: Vec<f64> = (0..=30).map(f64::from).collect();
    let eps = tune_epsilon(rx, &record.bits, &grid)?;
    let tuned = adapt_threshold(rx, eps)?;
    println!(
        "adaptive (tuned eps={eps}): tau={:.3} BER={:.5}",
        tuned.tau(),
        errors_at(tuned.tau())?
    );

    let mid = baseline_midpoint_threshold(config.level0, config.level1)?;
    println!(
        "midpoint of transmit levels: tau={mid:.3} BER={:.5}",
        errors_at(mid)?
    );

    let split = |bit: bool| -> fiberthresh::Result<SampleVector> {
        let v = rx
            .iter()
            .zip(&record.bits)
            .filter(|(_, &b)| b == bit)
            .map(|(&y, _)| y)
            .collect();
        SampleVector::new(v)
    };
    let mean = baseline_mean_threshold(&split(false)?, &split(true)?)?;
    println!(
        "midpoint of per-symbol means: tau={mean:.3} BER={:.5}",
        errors_at(mean)?
    );
    Ok(())
}
