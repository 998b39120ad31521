//! Cost-effective active learning (CEAL) on feature-vector datasets.
//!
//! The loop alternates between two complementary selections over the unlabeled
//! pool: the few most uncertain samples are sent to an annotator, while the many
//! samples the classifier is already sure about receive transient pseudo-labels.
//! Both sets fine-tune a small softmax classifier, and the confidence threshold
//! for pseudo-labeling tightens linearly with every fine-tuning pass.
//!
//! Modules, bottom-up:
//!
//! - [`model`]: softmax classifier with analytic gradients and mini-batch SGD.
//! - [`selection`]: least-confidence, margin and entropy scores; high-confidence
//!   pseudo-labeling; threshold schedule; criterion fusion; the TCAL baseline.
//! - [`data`]: CSV / IDX loaders, stratified splits, synthetic Gaussian mixtures,
//!   standardization.
//! - [`engine`]: the pool state machine and the iteration loop with pluggable oracles.
//! - [`harness`]: multi-seed variant comparisons, annotation savings, sensitivity sweeps.
//! - [`service`]: HTTP annotation sessions driving the engine with human labels.
//!
//! See the crate's `examples/` directory for one runnable program per capability.

pub mod data;
pub mod engine;
mod error;
pub mod harness;
pub mod model;
mod rng;
pub mod selection;
pub mod service;

pub use error::{Error, Result};

/// Index of a sample within its dataset.
pub type SampleId = usize;
