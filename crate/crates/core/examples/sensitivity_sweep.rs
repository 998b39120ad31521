//! Varies the initial threshold and its decay rate one at a time and prints
//! the final and curve-averaged accuracy of each setting.
//!
//! ```bash
//! cargo run --release -p ceal --example sensitivity_sweep
//! ```

use ceal::harness::{sweep_sensitivity, sweep_spread, ExperimentSpec};

fn main() -> ceal::Result<()> {
    let spec = ExperimentSpec::default();
    let delta0s = [0.025, 0.045, 0.05, 0.075, 0.1];
    let drs = [0.0, 0.001, 0.0033, 0.0066];
    let cells = sweep_sensitivity(&spec, &delta0s, &drs)?;
    println!("delta0   dr       final acc         curve mean");
    for c in &cells {
        println!(
            "{:<8} {:<8} {:.4} ± {:.4}   {:.4}",
            c.delta0,
            c.decay_rate,
            c.mean_final_accuracy,
            c.std_final_accuracy,
            c.mean_curve_accuracy
        );
    }
    println!(
        "std of final accuracy across settings: {:.4}",
        sweep_spread(&cells)
    );
    Ok(())
}
