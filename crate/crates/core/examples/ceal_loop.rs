//! Drives the loop by hand: asks for each batch, answers it from ground truth,
//! and prints what happened in every iteration.
//!
//! ```bash
//! cargo run --release -p ceal --example ceal_loop
//! ```

use std::collections::BTreeMap;

use ceal::engine::{CealConfig, Engine, QueryKind};
use ceal::harness::ExperimentSpec;

fn main() -> ceal::Result<()> {
    let spec = ExperimentSpec::default();
    let data = spec.dataset.load()?;
    let (pool, test) = spec.prepare(&data, 0)?;
    let truth: Vec<usize> = pool.samples().iter().map(|s| s.label).collect();

    let config = CealConfig {
        seed: 0,
        ..CealConfig::default()
    };
    let mut engine = Engine::new(pool, test, config, spec.split.init_fraction)?;

    println!("iter  labeled  acc     pseudo  err     delta");
    while let Some(query) = engine.pending()? {
        if query.kind == QueryKind::Annotation && query.iteration == 1 {
            let shown: Vec<String> = query
                .scores
                .iter()
                .take(5)
                .map(|s| format!("{s:.3}"))
                .collect();
            println!("      first query, highest entropies: {}", shown.join(" "));
        }
        let labels: BTreeMap<usize, usize> =
            query.sample_ids.iter().map(|&id| (id, truth[id])).collect();
        let r = engine.submit(&labels)?;
        println!(
            "{:>4}  {:>6.1}%  {:.4}  {:>6}  {:.4}  {:.4}",
            r.iteration,
            100.0 * r.pct_labeled,
            r.test_accuracy,
            r.pseudo_count,
            r.pseudo_error_rate,
            r.delta
        );
    }
    Ok(())
}
