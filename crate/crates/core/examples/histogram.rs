//! Histogram of the received signal with the threshold marker, as CSV.
//!
//! cargo run --example histogram > hist.csv

use fiberthresh::channel::transmit;
use fiberthresh::detector::adapt_threshold;
use fiberthresh::harness::{histogram, HistogramSpec};
use fiberthresh::LinkConfig;

fn main() -> fiberthresh::Result<()> {
    let record = transmit(&LinkConfig {
        n_bits: 100_000,
        ..LinkConfig::default()
    })?;
    let threshold = adapt_threshold(&record.rx_samples, 0.0)?;
    let hist = histogram(&record.rx_samples, &HistogramSpec::default(), &threshold)?;
    print!("{}", hist.to_csv());
    eprintln!("{} bins, tau={:.3}", hist.counts.len(), hist.tau);
    Ok(())
}
