//! Writes a small CSV file and an IDX image/label pair, loads both, and runs a
//! short experiment on the CSV through a spec file.
//!
//! ```bash
//! cargo run -p ceal --example load_datasets
//! ```

use std::fs;

use ceal::data::{class_histogram, load_csv, load_idx};
use ceal::harness::{run_experiment, ExperimentSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("ceal-load-datasets");
    fs::create_dir_all(&dir)?;

    let csv_path = dir.join("points.csv");
    let mut text = String::from("x,y,label\n");
    for i in 0..120 {
        let class = i % 3;
        let angle = class as f64 * 2.1 + (i as f64 * 0.37).sin() * 0.3;
        let radius = 3.0 + (i as f64 * 1.3).cos() * 0.5;
        text.push_str(&format!(
            "{:.4},{:.4},{class}\n",
            radius * angle.cos(),
            radius * angle.sin()
        ));
    }
    fs::write(&csv_path, text)?;
    let points = load_csv(&csv_path)?;
    println!(
        "csv: {} samples, {} features, classes {:?}",
        points.len(),
        points.dim(),
        class_histogram(&points)
    );

    // two 2x2 "images" in IDX format: magic, count, rows, cols, then pixels
    let images = dir.join("images.idx");
    let labels = dir.join("labels.idx");
    let mut bytes = vec![0, 0, 8, 3, 0, 0, 0, 2, 0, 0, 0, 2, 0, 0, 0, 2];
    bytes.extend([0, 128, 255, 64, 255, 255, 0, 0]);
    fs::write(&images, bytes)?;
    fs::write(&labels, [0, 0, 8, 1, 0, 0, 0, 2, 0, 1])?;
    let idx = load_idx(&images, &labels)?;
    println!(
        "idx: {} samples, first = {:?}",
        idx.len(),
        idx.samples()[0].features
    );

    let spec = ExperimentSpec::from_toml(&format!(
        r#"
        variants = ["AL_RAND", "CEAL_EN"]
        repetitions = 2
        [dataset]
        kind = "csv"
        path = "{}"
        [ceal]
        k = 10
        "#,
        csv_path.display()
    ))?;
    let result = run_experiment(&spec)?;
    for p in result.curves.iter().filter(|p| p.pct_labeled <= 0.5) {
        println!(
            "{:<8} {:>5.1}% labeled  acc {:.3}",
            p.variant,
            100.0 * p.pct_labeled,
            p.mean_accuracy
        );
    }
    Ok(())
}
