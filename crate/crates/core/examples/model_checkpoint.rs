//! Trains a model, writes it to a checkpoint, reads it back, and confirms the
//! restored copy predicts identically.
//!
//! ```bash
//! cargo run -p ceal --example model_checkpoint
//! ```

use std::fs;
use std::io::BufReader;

use ceal::data::synth_gaussian_mixture;
use ceal::model::{sgd_finetune, Architecture, ModelParams, TrainConfig};

fn main() -> ceal::Result<()> {
    let data = synth_gaussian_mixture(3, 100, 5, 3.0, 2)?;
    let arch = Architecture::linear(5, 3).with_hidden(8);
    let model = sgd_finetune(
        &ModelParams::init(&arch, 1),
        &data.labeled(),
        &TrainConfig::default(),
    )?;

    let path = std::env::temp_dir().join("ceal-model.txt");
    model.write_checkpoint(fs::File::create(&path)?)?;
    let restored = ModelParams::read_checkpoint(BufReader::new(fs::File::open(&path)?))?;

    let same = data
        .samples()
        .iter()
        .all(|s| model.forward_probs(&s.features).ok() == restored.forward_probs(&s.features).ok());
    println!("wrote {} ({} parameters)", path.display(), model.len());
    println!("restored model identical: {}", restored == model && same);
    println!(
        "training accuracy {:.4}",
        restored.accuracy(data.labeled())?
    );
    Ok(())
}
