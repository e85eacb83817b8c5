//! Fit Rayleigh and Rician models to simulated data and pick one by BIC.
//!
//! cargo run --example fit_distribution

use fiberthresh::channel::stream_rng;
use fiberthresh::channel::transmit;
use fiberthresh::distfit::{fit_best, Family, SampleVector};
use fiberthresh::LinkConfig;
use rand_distr::{Distribution, Normal};

fn report(label: &str, samples: &SampleVector) -> fiberthresh::Result<()> {
    let selection = fit_best(samples, &Family::ALL)?;
    println!("{label}:");
    for fit in &selection.candidates {
        println!(
            "  {:<8} sigma={:.4} s={:.4} logL={:.2} BIC={:.2}",
            fit.family.to_string(),
            fit.params.sigma(),
            fit.params.s(),
            fit.log_likelihood,
            fit.bic
        );
    }
    println!(
        "  best: {} ({} zeros excluded)",
        selection.best.family, selection.zeros_excluded
    );
    Ok(())
}

fn main() -> fiberthresh::Result<()> {
    let mut rng = stream_rng(7, 0);

    // envelope of a complex Gaussian with mean 12 and per-component sigma 3
    let normal = Normal::new(0.0, 3.0).expect("valid parameters");
    let rician: Vec<f64> = (0..5000)
        .map(|_| (12.0_f64 + normal.sample(&mut rng)).hypot(normal.sample(&mut rng)))
        .collect();
    report("Rician(s=12, sigma=3) draws", &SampleVector::new(rician)?)?;

    let record = transmit(&LinkConfig {
        n_bits: 100_000,
        ..LinkConfig::default()
    })?;
    report("pooled received signal, separation 50", &record.rx_samples)?;
    Ok(())
}
