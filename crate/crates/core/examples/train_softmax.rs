//! Trains a softmax classifier on Gaussian blobs, checks the analytic gradient
//! against central differences, and reports held-out accuracy.
//!
//! ```bash
//! cargo run -p ceal --example train_softmax -- 4
//! ```
//!
//! The optional argument is the hidden-layer width (0 for plain softmax regression).

use ceal::data::{normalize, split, synth_gaussian_mixture, SplitSpec};
use ceal::model::{gradient, loss, sgd_finetune, Architecture, ModelParams, TrainConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let hidden: usize = std::env::args().nth(1).map_or(Ok(0), |s| s.parse())?;

    let data = normalize(&synth_gaussian_mixture(4, 250, 8, 3.0, 1)?)?;
    let (train, test) = split(&data, &SplitSpec::default())?;
    let mut arch = Architecture::linear(train.dim(), train.class_count());
    if hidden > 0 {
        arch = arch.with_hidden(hidden);
    }
    let start = ModelParams::init(&arch, 7);
    let set = train.labeled();

    let batch = &set[..8];
    let analytic: Vec<f64> = gradient(&start, batch)?.values().collect();
    let mut worst = 0.0_f64;
    for (i, a) in analytic.iter().enumerate() {
        let at = |h: f64| -> ceal::Result<f64> {
            let mut p = start.clone();
            *p.values_mut().nth(i).expect("index in range") += h;
            loss(&p, batch)
        };
        let numeric = (at(1e-5)? - at(-1e-5)?) / 2e-5;
        let scale = a.abs().max(numeric.abs()).max(1e-8);
        worst = worst.max((a - numeric).abs() / scale);
    }
    println!(
        "{} parameters, worst gradient relative error {worst:.2e}",
        start.len()
    );

    let mut params = start;
    println!("epoch  train loss  test acc");
    for epoch in 1..=10 {
        let cfg = TrainConfig {
            epochs: 1,
            seed: epoch,
            ..TrainConfig::default()
        };
        params = sgd_finetune(&params, &set, &cfg)?;
        println!(
            "{epoch:>5}  {:>10.4}  {:.4}",
            loss(&params, &set)?,
            params.accuracy(test.labeled())?
        );
    }
    Ok(())
}
