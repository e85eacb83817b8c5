//! BER against epsilon at separations 50 and 70.
//!
//! cargo run --release --example epsilon_sweep

use fiberthresh::harness::sweep_epsilon;
use fiberthresh::LinkConfig;

fn main() -> fiberthresh::Result<()> {
    let grids: [(f64, &[f64]); 2] = [
        (50.0, &[0.0, 10.0, 15.0, 20.0]),
        (70.0, &[0.0, 10.0, 20.0, 25.0]),
    ];
    for (separation, grid) in grids {
        let config = LinkConfig::default().with_separation(separation);
        let table = sweep_epsilon(&config, grid, 20)?;
        println!("separation {separation}:");
        for row in &table.rows {
            println!(
                "  eps={:<4} mean BER={:.6}",
                row.epsilon.to_string(),
                row.mean_ber
            );
        }
    }
    Ok(())
}
