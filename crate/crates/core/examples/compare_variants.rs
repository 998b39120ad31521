//! Runs the synthetic desk benchmark for several variants and prints the
//! accuracy curves plus how much annotation each needed to get within 95% of
//! the fully labeled baseline.
//!
//! ```bash
//! cargo run --release -p ceal --example compare_variants -- AL_RAND CEAL_EN AL_EN TCAL
//! ```

use ceal::harness::{annotation_savings, run_experiment, savings_target, ExperimentSpec, Variant};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut spec = ExperimentSpec::default();
    let requested: Vec<Variant> = std::env::args()
        .skip(1)
        .map(|s| s.parse())
        .collect::<Result<_, _>>()?;
    if !requested.is_empty() {
        spec.variants = requested;
    }
    if !spec.variants.contains(&Variant::AlAll) {
        spec.variants.push(Variant::AlAll);
    }

    let result = run_experiment(&spec)?;
    for &variant in &spec.variants {
        println!("{variant}");
        for p in result.curve(variant) {
            println!(
                "  {:>5.1}% labeled  acc {:.4} ± {:.4}",
                100.0 * p.pct_labeled,
                p.mean_accuracy,
                p.stddev_accuracy
            );
        }
    }

    if let Some(target) = savings_target(&spec, &result) {
        println!("\nlabeled fraction needed for accuracy {target:.4}:");
        for (variant, pct) in annotation_savings(&result.curves, target) {
            match pct {
                Some(p) => println!("  {variant:<12} {:.1}%", 100.0 * p),
                None => println!("  {variant:<12} not reached"),
            }
        }
    }
    Ok(())
}
