//! BER against level separation for three apriori probabilities, as CSV.
//!
//! cargo run --release --example separation_sweep > sweep.csv

use fiberthresh::harness::{spearman, sweep_separation, EpsilonPolicy};
use fiberthresh::LinkConfig;

fn main() -> fiberthresh::Result<()> {
    let separations = [30.0, 40.0, 50.0, 60.0, 70.0, 80.0];
    let p1_list = [0.5, 0.9, 0.3];
    let table = sweep_separation(
        &LinkConfig::default(),
        &separations,
        &p1_list,
        &EpsilonPolicy::Fixed(0.0),
        20,
    )?;
    print!("{}", table.to_csv());
    for p1 in p1_list {
        let (seps, bers): (Vec<f64>, Vec<f64>) = table.curve(p1).into_iter().unzip();
        if let Some(rho) = spearman(&seps, &bers) {
            eprintln!("p1={p1}: Spearman(separation, BER) = {rho:.3}");
        }
    }
    Ok(())
}
