//! Compares the clustering-based batch selector with plain margin sampling and
//! with pseudo-labeling on top of entropy sampling.
//!
//! ```bash
//! cargo run --release -p ceal --example tcal_baseline
//! ```

use ceal::harness::{run_experiment, ExperimentSpec, Variant};

fn main() -> ceal::Result<()> {
    let spec = ExperimentSpec {
        variants: vec![Variant::AlMs, Variant::Tcal, Variant::CealEn],
        repetitions: 3,
        ..ExperimentSpec::default()
    };
    let result = run_experiment(&spec)?;
    let curves: Vec<_> = spec.variants.iter().map(|&v| result.curve(v)).collect();

    print!("labeled ");
    for v in &spec.variants {
        print!("{v:>10}");
    }
    println!();
    for i in 0..curves[0].len().min(10) {
        print!("{:>6.1}% ", 100.0 * curves[0][i].pct_labeled);
        for c in &curves {
            print!("{:>10.4}", c[i].mean_accuracy);
        }
        println!();
    }
    Ok(())
}
