//! Multinomial softmax classifier trained with mini-batch SGD.
//!
//! The default architecture is plain multinomial logistic regression; optional
//! hidden layers use rectified-linear activations. The output layer always feeds
//! a softmax, so the cross-entropy gradient with respect to the final
//! pre-activations is the residual `p - onehot(y)`.

use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::rng::seeded;
use crate::{Error, Result};

/// Floor applied to per-sample log-probabilities before they enter the loss.
pub const LOG_PROB_FLOOR: f64 = -50.0;

const INIT_SCALE: f64 = 0.05;
const CHECKPOINT_MAGIC: &str = "ceal-model";
const CHECKPOINT_VERSION: u32 = 1;

/// A labeled feature vector borrowed from some dataset.
pub type Labeled<'a> = (&'a [f64], usize);

/// Class probabilities on the simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates that `probs` is a distribution: entries in `[0, 1]` summing to 1 within 1e-9.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Empty("probability vector"));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0 || *p > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "probability entries must lie in [0, 1]: {probs:?}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self(probs))
    }

    /// Uniform distribution over `m` classes.
    pub fn uniform(m: usize) -> Self {
        Self(vec![1.0 / m as f64; m])
    }

    /// Index of the largest probability, lowest index on ties.
    pub fn argmax(&self) -> usize {
        argmax(&self.0)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for ProbabilityVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Lowest index of the maximum entry.
pub(crate) fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (j, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = j;
        }
    }
    best
}

/// Layer sizes of a classifier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Architecture {
    pub input_dim: usize,
    pub class_count: usize,
    /// Widths of ReLU hidden layers; empty means logistic regression.
    #[serde(default)]
    pub hidden: Vec<usize>,
}

impl Architecture {
    pub fn linear(input_dim: usize, class_count: usize) -> Self {
        Self {
            input_dim,
            class_count,
            hidden: Vec::new(),
        }
    }

    pub fn with_hidden(mut self, width: usize) -> Self {
        self.hidden.push(width);
        self
    }
}

/// A dense affine layer with row-major `outputs x inputs` weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Self {
            inputs,
            outputs,
            weights: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    #[inline]
    pub fn weight(&self, out: usize, inp: usize) -> f64 {
        self.weights[out * self.inputs + inp]
    }

    fn affine(&self, x: &[f64]) -> Vec<f64> {
        self.weights
            .chunks_exact(self.inputs)
            .zip(&self.bias)
            .map(|(row, b)| b + row.iter().zip(x).map(|(w, xi)| w * xi).sum::<f64>())
            .collect()
    }
}

/// Parameters of the classifier. Gradients share this shape.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelParams {
    layers: Vec<Layer>,
}

/// Gradient of the loss, shaped like [`ModelParams`].
pub type Gradient = ModelParams;

impl ModelParams {
    /// Builds parameters from explicit layers, checking that dimensions chain.
    pub fn from_layers(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::Empty("layer list"));
        }
        for layer in &layers {
            if layer.inputs == 0 || layer.outputs == 0 {
                return Err(Error::InvalidArgument("layer with zero width".into()));
            }
            if layer.weights.len() != layer.inputs * layer.outputs
                || layer.bias.len() != layer.outputs
            {
                return Err(Error::InvalidArgument(format!(
                    "layer buffers do not match shape {}x{}",
                    layer.outputs, layer.inputs
                )));
            }
            if layer
                .weights
                .iter()
                .chain(&layer.bias)
                .any(|v| !v.is_finite())
            {
                return Err(Error::InvalidArgument("non-finite parameter".into()));
            }
        }
        for pair in layers.windows(2) {
            if pair[0].outputs != pair[1].inputs {
                return Err(Error::DimensionMismatch {
                    expected: pair[0].outputs,
                    actual: pair[1].inputs,
                });
            }
        }
        Ok(Self { layers })
    }

    /// All-zero parameters; the output is uniform for every input.
    pub fn zeros(arch: &Architecture) -> Self {
        let layers = Self::shapes(arch)
            .map(|(i, o)| Layer::zeros(i, o))
            .collect();
        Self { layers }
    }

    /// Weights drawn uniformly from `(-0.05, 0.05)`, biases zero.
    pub fn init(arch: &Architecture, seed: u64) -> Self {
        let mut rng = seeded(seed);
        let layers = Self::shapes(arch)
            .map(|(i, o)| {
                let mut layer = Layer::zeros(i, o);
                for w in &mut layer.weights {
                    *w = rng.random_range(-INIT_SCALE..INIT_SCALE);
                }
                layer
            })
            .collect();
        Self { layers }
    }

    fn shapes(arch: &Architecture) -> impl Iterator<Item = (usize, usize)> + '_ {
        let widths: Vec<usize> = std::iter::once(arch.input_dim)
            .chain(arch.hidden.iter().copied())
            .chain(std::iter::once(arch.class_count))
            .collect();
        (0..widths.len() - 1).map(move |k| (widths[k], widths[k + 1]))
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn class_count(&self) -> usize {
        self.layers[self.layers.len() - 1].outputs
    }

    pub fn architecture(&self) -> Architecture {
        Architecture {
            input_dim: self.input_dim(),
            class_count: self.class_count(),
            hidden: self.layers[..self.layers.len() - 1]
                .iter()
                .map(|l| l.outputs)
                .collect(),
        }
    }

    /// Number of scalar parameters.
    pub fn len(&self) -> usize {
        self.layers
            .iter()
            .map(|l| l.weights.len() + l.bias.len())
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every scalar parameter, layer by layer, weights before biases.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.layers
            .iter()
            .flat_map(|l| l.weights.iter().chain(&l.bias).copied())
    }

    /// Mutable view over the same ordering as [`values`](Self::values).
    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> + '_ {
        self.layers
            .iter_mut()
            .flat_map(|l| l.weights.iter_mut().chain(l.bias.iter_mut()))
    }

    /// Adds `c` to every output-layer bias.
    pub fn shift_output_bias(&mut self, c: f64) {
        let last = self.layers.len() - 1;
        for b in &mut self.layers[last].bias {
            *b += c;
        }
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// Pre-activations of every layer; the last entry holds the logits.
    fn activations(&self, x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(self.layers.len());
        for (k, layer) in self.layers.iter().enumerate() {
            let z = match k {
                0 => layer.affine(x),
                _ => layer.affine(&relu(&acts[k - 1])),
            };
            acts.push(z);
        }
        acts
    }

    /// Final-layer pre-activations `z(x)`.
    pub fn logits(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.activations(x).pop().expect("at least one layer"))
    }

    /// Softmax of the logits.
    pub fn forward_probs(&self, x: &[f64]) -> Result<ProbabilityVector> {
        Ok(ProbabilityVector(softmax(&self.logits(x)?)))
    }

    /// Most probable class, lowest index on ties.
    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.logits(x)?))
    }

    /// Fraction of `test` predicted correctly.
    pub fn accuracy<'a, I>(&self, test: I) -> Result<f64>
    where
        I: IntoIterator<Item = Labeled<'a>>,
    {
        let mut total = 0usize;
        let mut correct = 0usize;
        for (x, y) in test {
            total += 1;
            if self.predict(x)? == y {
                correct += 1;
            }
        }
        if total == 0 {
            return Err(Error::Empty("test set"));
        }
        Ok(correct as f64 / total as f64)
    }

    /// Writes a text checkpoint. Values are stored as IEEE-754 bit patterns so
    /// loading reproduces every parameter exactly.
    pub fn write_checkpoint<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}")?;
        writeln!(w, "input_dim {}", self.input_dim())?;
        writeln!(w, "class_count {}", self.class_count())?;
        writeln!(w, "layers {}", self.layers.len())?;
        for layer in &self.layers {
            writeln!(w, "layer {} {}", layer.outputs, layer.inputs)?;
            for row in layer.weights.chunks_exact(layer.inputs) {
                writeln!(w, "w {}", hex_row(row))?;
            }
            writeln!(w, "b {}", hex_row(&layer.bias))?;
        }
        Ok(())
    }

    pub fn read_checkpoint<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let mut next = move || -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Checkpoint("unexpected end of file".into()))?
                .map_err(Error::from)
        };

        let header = next()?;
        if header != format!("{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION}") {
            return Err(Error::Checkpoint(format!("bad header `{header}`")));
        }
        let input_dim = keyed_usize(&next()?, "input_dim")?;
        let class_count = keyed_usize(&next()?, "class_count")?;
        let n_layers = keyed_usize(&next()?, "layers")?;

        let mut layers = Vec::with_capacity(n_layers);
        for _ in 0..n_layers {
            let shape = next()?;
            let dims: Vec<&str> = shape.split_whitespace().collect();
            let (outputs, inputs) = match dims.as_slice() {
                ["layer", o, i] => (parse_usize(o)?, parse_usize(i)?),
                _ => return Err(Error::Checkpoint(format!("bad layer line `{shape}`"))),
            };
            let mut weights = Vec::with_capacity(outputs * inputs);
            for _ in 0..outputs {
                let row = parse_hex_row(&next()?, "w", inputs)?;
                weights.extend(row);
            }
            let bias = parse_hex_row(&next()?, "b", outputs)?;
            layers.push(Layer {
                inputs,
                outputs,
                weights,
                bias,
            });
        }
        let params = Self::from_layers(layers).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if params.input_dim() != input_dim || params.class_count() != class_count {
            return Err(Error::Checkpoint(
                "declared dimensions disagree with layer shapes".into(),
            ));
        }
        Ok(params)
    }

    fn axpy(&mut self, alpha: f64, other: &Self) {
        for (p, g) in self.values_mut().zip(other.values()) {
            *p += alpha * g;
        }
    }
}

fn hex_row(values: &[f64]) -> String {
    let mut s = String::with_capacity(values.len() * 17);
    for (k, v) in values.iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        write!(s, "{:016x}", v.to_bits()).expect("writing to a String");
    }
    s
}

fn parse_usize(s: &str) -> Result<usize> {
    s.parse()
        .map_err(|_| Error::Checkpoint(format!("expected integer, found `{s}`")))
}

fn keyed_usize(line: &str, key: &str) -> Result<usize> {
    match line.split_once(' ') {
        Some((k, v)) if k == key => parse_usize(v.trim()),
        _ => Err(Error::Checkpoint(format!(
            "expected `{key} <n>`, found `{line}`"
        ))),
    }
}

fn parse_hex_row(line: &str, tag: &str, expected: usize) -> Result<Vec<f64>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(Error::Checkpoint(format!(
            "expected `{tag}` row, found `{line}`"
        )));
    }
    let values = parts
        .map(|h| {
            u64::from_str_radix(h, 16)
                .map(f64::from_bits)
                .map_err(|_| Error::Checkpoint(format!("bad value `{h}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if values.len() != expected {
        return Err(Error::Checkpoint(format!(
            "`{tag}` row has {} values, expected {expected}",
            values.len()
        )));
    }
    Ok(values)
}

fn relu(z: &[f64]) -> Vec<f64> {
    z.iter().map(|v| v.max(0.0)).collect()
}

/// Max-shifted softmax.
pub fn softmax(z: &[f64]) -> Vec<f64> {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = z.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / total).collect()
}

fn log_softmax_at(z: &[f64], j: usize) -> f64 {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = max + z.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
    z[j] - lse
}

fn check_batch(params: &ModelParams, batch: &[Labeled<'_>]) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::Empty("batch"));
    }
    let m = params.class_count();
    for (x, y) in batch {
        params.check_input(x)?;
        if *y >= m {
            return Err(Error::LabelOutOfRange {
                label: *y,
                class_count: m,
            });
        }
    }
    Ok(())
}

/// Mean negative log-likelihood of the batch.
pub fn loss(params: &ModelParams, batch: &[Labeled<'_>]) -> Result<f64> {
    check_batch(params, batch)?;
    let total: f64 = batch
        .iter()
        .map(|(x, y)| {
            let z = params.activations(x).pop().expect("at least one layer");
            -log_softmax_at(&z, *y).max(LOG_PROB_FLOOR)
        })
        .sum();
    Ok(total / batch.len() as f64)
}

/// Gradient of [`loss`] with respect to every parameter, by back-propagation.
pub fn gradient(params: &ModelParams, batch: &[Labeled<'_>]) -> Result<Gradient> {
    check_batch(params, batch)?;
    let mut grad = ModelParams {
        layers: params
            .layers
            .iter()
            .map(|l| Layer::zeros(l.inputs, l.outputs))
            .collect(),
    };
    let scale = 1.0 / batch.len() as f64;
    let last = params.layers.len() - 1;

    for (x, y) in batch {
        let acts = params.activations(x);
        if log_softmax_at(&acts[last], *y) < LOG_PROB_FLOOR {
            continue;
        }
        // (p - onehot) / N at the logits
        let mut delta = softmax(&acts[last]);
        delta[*y] -= 1.0;
        for d in &mut delta {
            *d *= scale;
        }

        for k in (0..=last).rev() {
            let input: Vec<f64> = if k == 0 {
                x.to_vec()
            } else {
                relu(&acts[k - 1])
            };
            let layer = &params.layers[k];
            let g = &mut grad.layers[k];
            for (o, d) in delta.iter().enumerate() {
                if *d == 0.0 {
                    continue;
                }
                let row = &mut g.weights[o * layer.inputs..(o + 1) * layer.inputs];
                for (gw, xi) in row.iter_mut().zip(&input) {
                    *gw += d * xi;
                }
                g.bias[o] += d;
            }
            if k > 0 {
                let below = &acts[k - 1];
                delta = (0..layer.inputs)
                    .map(|i| {
                        if below[i] <= 0.0 {
                            return 0.0;
                        }
                        delta
                            .iter()
                            .enumerate()
                            .map(|(o, d)| d * layer.weight(o, i))
                            .sum()
                    })
                    .collect();
            }
        }
    }
    Ok(grad)
}

/// Hyperparameters of one fine-tuning call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.05,
            epochs: 20,
            batch_size: 16,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 || self.batch_size == 0 {
            return Err(Error::InvalidArgument(
                "epochs and batch_size must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Runs `cfg.epochs` passes of mini-batch SGD starting from `params`.
///
/// Sample order is reshuffled every epoch from a generator seeded only by
/// `cfg.seed`, so the result is a deterministic function of the arguments.
pub fn sgd_finetune(
    params: &ModelParams,
    dataset: &[Labeled<'_>],
    cfg: &TrainConfig,
) -> Result<ModelParams> {
    cfg.validate()?;
    check_batch(params, dataset)?;
    let mut rng = seeded(cfg.seed);
    let mut current = params.clone();
    let mut order: Vec<usize> = (0..dataset.len()).collect();
    let mut batch = Vec::with_capacity(cfg.batch_size);
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(cfg.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| dataset[i]));
            let grad = gradient(&current, &batch)?;
            current.axpy(-cfg.learning_rate, &grad);
        }
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn bias_only(bias: Vec<f64>, d: usize) -> ModelParams {
        let m = bias.len();
        let mut layer = Layer::zeros(d, m);
        layer.bias = bias;
        ModelParams::from_layers(vec![layer]).unwrap()
    }

    #[test]
    fn zero_params_are_uniform() {
        let p = ModelParams::zeros(&Architecture::linear(3, 4));
        let probs = p.forward_probs(&[1.0, -2.0, 0.5]).unwrap();
        for v in probs.iter() {
            assert_abs_diff_eq!(*v, 0.25, epsilon = 1e-15);
        }
    }

    #[test]
    fn log_biases_give_proportional_probs() {
        let p = bias_only(vec![1f64.ln(), 2f64.ln(), 3f64.ln()], 2);
        let probs = p.forward_probs(&[0.3, 0.7]).unwrap();
        assert_abs_diff_eq!(probs[0], 1.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[1], 2.0 / 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(probs[2], 3.0 / 6.0, epsilon = 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let p = ModelParams::zeros(&Architecture::linear(3, 2));
        assert!(matches!(
            p.forward_probs(&[1.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                actual: 1
            })
        ));
    }

    #[test]
    fn uniform_loss_is_ln_m() {
        let p = ModelParams::zeros(&Architecture::linear(2, 4));
        let x = [0.1, 0.2];
        let batch = [(&x[..], 0), (&x[..], 3)];
        assert_abs_diff_eq!(loss(&p, &batch).unwrap(), 4f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn confident_correct_params_have_near_zero_loss() {
        let p = bias_only(vec![40.0, 0.0], 1);
        let x = [0.0];
        assert!(loss(&p, &[(&x[..], 0)]).unwrap() < 1e-15);
    }

    #[test]
    fn loss_is_floored() {
        let p = bias_only(vec![500.0, 0.0], 1);
        let x = [0.0];
        assert_abs_diff_eq!(loss(&p, &[(&x[..], 1)]).unwrap(), 50.0);
    }

    #[test]
    fn loss_rejects_empty_and_bad_labels() {
        let p = ModelParams::zeros(&Architecture::linear(1, 2));
        assert!(matches!(loss(&p, &[]), Err(Error::Empty(_))));
        let x = [0.0];
        assert!(matches!(
            loss(&p, &[(&x[..], 2)]),
            Err(Error::LabelOutOfRange {
                label: 2,
                class_count: 2
            })
        ));
        assert!(gradient(&p, &[]).is_err());
    }

    #[test]
    fn gradient_vanishes_when_residual_is_zero() {
        // One class only: p = 1 exactly for the true label.
        let p = ModelParams::init(&Architecture::linear(2, 1), 3);
        let x = [0.4, -1.0];
        let g = gradient(&p, &[(&x[..], 0), (&x[..], 0)]).unwrap();
        assert!(g.values().all(|v| v == 0.0));
    }

    #[test]
    fn duplicated_sample_gradient_matches_single() {
        let p = ModelParams::init(&Architecture::linear(3, 3), 9);
        let x = [0.5, -0.2, 1.5];
        let one = gradient(&p, &[(&x[..], 1)]).unwrap();
        let two = gradient(&p, &[(&x[..], 1), (&x[..], 1)]).unwrap();
        for (a, b) in one.values().zip(two.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn uniform_prediction_ties_to_class_zero() {
        let p = ModelParams::zeros(&Architecture::linear(2, 5));
        assert_eq!(p.predict(&[3.0, 1.0]).unwrap(), 0);
    }

    #[test]
    fn constant_predictor_on_balanced_set() {
        let p = ModelParams::zeros(&Architecture::linear(1, 4));
        let xs: Vec<[f64; 1]> = (0..40).map(|i| [i as f64]).collect();
        let set: Vec<Labeled<'_>> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| (&x[..], i % 4))
            .collect();
        assert_abs_diff_eq!(p.accuracy(set).unwrap(), 0.25);
        assert!(matches!(p.accuracy(Vec::new()), Err(Error::Empty(_))));
    }

    #[test]
    fn layers_must_chain() {
        let err = ModelParams::from_layers(vec![Layer::zeros(2, 3), Layer::zeros(4, 2)]);
        assert!(matches!(err, Err(Error::DimensionMismatch { .. })));
        assert!(ModelParams::from_layers(vec![Layer::zeros(2, 3), Layer::zeros(3, 2)]).is_ok());
    }

    #[test]
    fn init_is_small_and_biases_zero() {
        let p = ModelParams::init(&Architecture::linear(8, 3).with_hidden(5), 1);
        for l in p.layers() {
            assert!(l.weights.iter().all(|w| w.abs() < INIT_SCALE));
            assert!(l.bias.iter().all(|b| *b == 0.0));
        }
        assert_eq!(p.architecture().hidden, vec![5]);
    }

    #[test]
    fn train_config_validation() {
        let mut cfg = TrainConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.learning_rate = 0.0;
        assert!(cfg.validate().is_err());
        cfg.learning_rate = 0.1;
        cfg.batch_size = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn checkpoint_rejects_garbage() {
        assert!(ModelParams::read_checkpoint("nope\n".as_bytes()).is_err());
        let text = "ceal-model 1\ninput_dim 1\nclass_count 2\nlayers 1\nlayer 2 1\nw 0\n";
        assert!(ModelParams::read_checkpoint(text.as_bytes()).is_err());
    }
}
