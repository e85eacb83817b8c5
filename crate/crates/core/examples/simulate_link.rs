//! Simulate a block and look at the received symbol clouds.
//!
//! cargo run --example simulate_link

use fiberthresh::channel::transmit;
use fiberthresh::LinkConfig;

fn describe(label: &str, values: &[f64]) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let zeros = values.iter().filter(|&&v| v == 0.0).count();
    println!(
        "  {label}: n={} mean={mean:.3} sd={sd:.3} zeros={zeros}",
        values.len()
    );
}

fn main() -> fiberthresh::Result<()> {
    for config in [
        LinkConfig::default(),
        LinkConfig {
            fiber_length_m: 50.0,
            attenuation_db_per_km: 180.0,
            ..LinkConfig::default()
        },
        LinkConfig {
            fading: false,
            ..LinkConfig::default()
        },
    ] {
        let record = transmit(&config)?;
        println!(
            "length {} m, {} dB/km (gain {:.4}), fading {}:",
            config.fiber_length_m,
            config.attenuation_db_per_km,
            config.attenuation_gain(),
            if config.fading { "on" } else { "off" }
        );
        for bit in [false, true] {
            let cloud: Vec<f64> = record
                .rx_samples
                .iter()
                .zip(&record.bits)
                .filter(|(_, &b)| b == bit)
                .map(|(&y, _)| y)
                .collect();
            describe(if bit { "bit 1" } else { "bit 0" }, &cloud);
        }
    }
    Ok(())
}
