//! Datasets: loading, splitting, generation and standardization.

use std::collections::BTreeMap;
use std::io::{Cursor, Read};
use std::path::{Path, PathBuf};

use byteorder::{BigEndian, ReadBytesExt};
use rand::seq::SliceRandom;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::model::Labeled;
use crate::rng::seeded;
use crate::{Error, Result, SampleId};

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// One pool element.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub id: SampleId,
    pub features: Vec<f64>,
    /// Ground truth. Only oracles and metrics read this.
    pub label: usize,
    /// Id of this sample in the dataset it was split or loaded from; names the
    /// sidecar image `<source_id>.png`.
    pub source_id: usize,
}

/// An immutable collection of samples with ids `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    samples: Vec<Sample>,
    class_count: usize,
    dim: usize,
    pub class_names: Option<Vec<String>>,
    pub image_dir: Option<PathBuf>,
}

impl Dataset {
    /// Builds a dataset, assigning ids in order.
    pub fn new(features: Vec<Vec<f64>>, labels: Vec<usize>, class_count: usize) -> Result<Self> {
        if features.len() != labels.len() {
            return Err(Error::InvalidArgument(format!(
                "{} feature rows but {} labels",
                features.len(),
                labels.len()
            )));
        }
        let samples = features
            .into_iter()
            .zip(labels)
            .enumerate()
            .map(|(id, (features, label))| Sample {
                id,
                features,
                label,
                source_id: id,
            })
            .collect();
        Self::from_samples(samples, class_count)
    }

    fn from_samples(mut samples: Vec<Sample>, class_count: usize) -> Result<Self> {
        let first = samples.first().ok_or(Error::Empty("dataset"))?;
        let dim = first.features.len();
        if dim == 0 {
            return Err(Error::InvalidArgument("zero-dimensional features".into()));
        }
        for (id, s) in samples.iter_mut().enumerate() {
            s.id = id;
            if s.features.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: s.features.len(),
                });
            }
            if s.features.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "sample {id} has a non-finite feature"
                )));
            }
            if s.label >= class_count {
                return Err(Error::LabelOutOfRange {
                    label: s.label,
                    class_count,
                });
            }
        }
        Ok(Self {
            samples,
            class_count,
            dim,
            class_names: None,
            image_dir: None,
        })
    }

    fn derive(&self, samples: Vec<Sample>) -> Result<Self> {
        let mut out = Self::from_samples(samples, self.class_count)?;
        out.class_names = self.class_names.clone();
        out.image_dir = self.image_dir.clone();
        Ok(out)
    }

    pub fn with_image_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.image_dir = Some(dir.into());
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn sample(&self, id: SampleId) -> Option<&Sample> {
        self.samples.get(id)
    }

    pub fn features(&self, id: SampleId) -> &[f64] {
        &self.samples[id].features
    }

    /// `(features, label)` pairs in id order.
    pub fn labeled(&self) -> Vec<Labeled<'_>> {
        self.samples
            .iter()
            .map(|s| (s.features.as_slice(), s.label))
            .collect()
    }

    /// Sample ids grouped by ground-truth class.
    pub fn ids_by_class(&self) -> Vec<Vec<SampleId>> {
        let mut by_class = vec![Vec::new(); self.class_count];
        for s in &self.samples {
            by_class[s.label].push(s.id);
        }
        by_class
    }

    /// Location of the sidecar image for a sample, when one exists on disk.
    pub fn image_path(&self, id: SampleId) -> Option<PathBuf> {
        let dir = self.image_dir.as_ref()?;
        let path = dir.join(format!("{}.png", self.sample(id)?.source_id));
        path.is_file().then_some(path)
    }
}

/// Train/test split proportions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub init_fraction: f64,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            init_fraction: 0.1,
            seed: 0,
        }
    }
}

impl SplitSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "train_fraction must be in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if !(self.init_fraction > 0.0 && self.init_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "init_fraction must be in (0, 1], got {}",
                self.init_fraction
            )));
        }
        Ok(())
    }
}

/// Number of the `n` samples of one class that a `fraction` should take,
/// rounded to nearest and kept within `[lo, n - reserve]`.
pub(crate) fn class_quota(n: usize, fraction: f64, lo: usize, reserve: usize) -> usize {
    let want = (fraction * n as f64).round() as usize;
    want.clamp(lo, n - reserve)
}

/// Stratified split: each class contributes `train_fraction` of its samples to
/// the training pool, keeping at least one sample on each side.
pub fn split(dataset: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    spec.validate()?;
    let mut rng = seeded(spec.seed);
    let mut train_ids = Vec::new();
    let mut test_ids = Vec::new();
    for (class, mut ids) in dataset.ids_by_class().into_iter().enumerate() {
        if ids.is_empty() {
            continue;
        }
        if ids.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "class {class} has {} sample(s); a split needs at least 2",
                ids.len()
            )));
        }
        ids.shuffle(&mut rng);
        let n_train = class_quota(ids.len(), spec.train_fraction, 1, 1);
        train_ids.extend_from_slice(&ids[..n_train]);
        test_ids.extend_from_slice(&ids[n_train..]);
    }
    train_ids.sort_unstable();
    test_ids.sort_unstable();
    let pick = |ids: &[SampleId]| -> Vec<Sample> {
        ids.iter().map(|&id| dataset.samples[id].clone()).collect()
    };
    Ok((
        dataset.derive(pick(&train_ids))?,
        dataset.derive(pick(&test_ids))?,
    ))
}

/// Isotropic unit-variance Gaussian classes centred on hypercube corners.
///
/// Class `c` sits at `separation / 2 * s` where `s_k = +1` if bit `k` of `c`
/// is set and `-1` otherwise, so neighbouring classes are `separation` apart.
/// Samples are ordered class by class.
pub fn synth_gaussian_mixture(
    m: usize,
    per_class: usize,
    d: usize,
    class_separation: f64,
    seed: u64,
) -> Result<Dataset> {
    if m < 2 || d < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 classes and 2 dimensions, got m={m}, d={d}"
        )));
    }
    if d < usize::BITS as usize && m > (1usize << d) {
        return Err(Error::InvalidArgument(format!(
            "{m} classes do not fit on the corners of a {d}-cube"
        )));
    }
    if per_class == 0 {
        return Err(Error::Empty("class"));
    }
    let half = class_separation / 2.0;
    let mut rng = seeded(seed);
    let mut features = Vec::with_capacity(m * per_class);
    let mut labels = Vec::with_capacity(m * per_class);
    for c in 0..m {
        let center: Vec<f64> = (0..d)
            .map(|k| {
                let bit = k < usize::BITS as usize && (c >> k) & 1 == 1;
                if bit {
                    half
                } else {
                    -half
                }
            })
            .collect();
        for _ in 0..per_class {
            let x: Vec<f64> = center
                .iter()
                .map(|mu| {
                    mu + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
                })
                .collect();
            features.push(x);
            labels.push(c);
        }
    }
    Dataset::new(features, labels, m)
}

/// Per-dimension standardization statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Population standard deviation; zero marks a constant dimension.
    pub std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(dataset: &Dataset) -> Result<Self> {
        let n = dataset.len();
        if n < 2 {
            return Err(Error::InvalidArgument(
                "standardization needs at least 2 samples".into(),
            ));
        }
        let d = dataset.dim();
        let mut mean = vec![0.0; d];
        for s in dataset.samples() {
            for (m, v) in mean.iter_mut().zip(&s.features) {
                *m += v;
            }
        }
        for m in &mut mean {
            *m /= n as f64;
        }
        let mut var = vec![0.0; d];
        for s in dataset.samples() {
            for ((acc, v), m) in var.iter_mut().zip(&s.features).zip(&mean) {
                *acc += (v - m) * (v - m);
            }
        }
        let std = var.into_iter().map(|v| (v / n as f64).sqrt()).collect();
        Ok(Self { mean, std })
    }

    pub fn transform(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.mean.iter().zip(&self.std))
            .map(|(v, (m, s))| if *s > 0.0 { (v - m) / s } else { 0.0 })
            .collect()
    }

    pub fn apply(&self, dataset: &Dataset) -> Result<Dataset> {
        if dataset.dim() != self.mean.len() {
            return Err(Error::DimensionMismatch {
                expected: self.mean.len(),
                actual: dataset.dim(),
            });
        }
        let samples = dataset
            .samples()
            .iter()
            .map(|s| Sample {
                features: self.transform(&s.features),
                ..s.clone()
            })
            .collect();
        dataset.derive(samples)
    }
}

/// Standardizes a dataset with its own statistics.
pub fn normalize(dataset: &Dataset) -> Result<Dataset> {
    Standardizer::fit(dataset)?.apply(dataset)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads a comma-separated file whose header names the feature columns followed
/// by a final `label` column. The class count is the largest label plus one.
pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| parse_err(path, 1, e.to_string()))?
        .clone();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(parse_err(path, 1, "missing header row"));
    }
    if headers.len() < 2 || &headers[headers.len() - 1] != "label" {
        return Err(parse_err(
            path,
            1,
            "header must list feature columns and end with `label`",
        ));
    }

    let mut features = Vec::new();
    let mut labels = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        let cells: Vec<&str> = record.iter().collect();
        let (label_cell, feature_cells) = cells
            .split_last()
            .ok_or_else(|| parse_err(path, line, "empty row"))?;
        let label: i64 = label_cell.parse().map_err(|_| {
            parse_err(
                path,
                line,
                format!("label `{label_cell}` is not an integer"),
            )
        })?;
        if label < 0 {
            return Err(parse_err(path, line, format!("negative label {label}")));
        }
        let row = feature_cells
            .iter()
            .map(|c| {
                c.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| parse_err(path, line, format!("`{c}` is not a finite number")))
            })
            .collect::<Result<Vec<_>>>()?;
        features.push(row);
        labels.push(label as usize);
    }
    if features.is_empty() {
        return Err(parse_err(path, 1, "no data rows"));
    }
    let class_count = labels.iter().max().map_or(0, |m| m + 1);
    Dataset::new(features, labels, class_count)
}

fn read_all(path: &Path) -> Result<Vec<u8>> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)?.read_to_end(&mut bytes)?;
    Ok(bytes)
}

fn idx_err(path: &Path, message: impl Into<String>) -> Error {
    parse_err(path, 0, message)
}

/// Parses an IDX image file and its label file (MNIST encoding). Images are
/// flattened row-major and scaled to `[0, 1]`.
pub fn load_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<Dataset> {
    let images_path = images_path.as_ref();
    let labels_path = labels_path.as_ref();

    let bytes = read_all(images_path)?;
    let mut cur = Cursor::new(bytes.as_slice());
    let truncated = |_| idx_err(images_path, "truncated header");
    let magic = cur.read_u32::<BigEndian>().map_err(truncated)?;
    if magic != IDX_IMAGES_MAGIC {
        return Err(idx_err(images_path, format!("bad magic {magic:#010x}")));
    }
    let count = cur.read_u32::<BigEndian>().map_err(truncated)? as usize;
    let rows = cur.read_u32::<BigEndian>().map_err(truncated)? as usize;
    let cols = cur.read_u32::<BigEndian>().map_err(truncated)? as usize;
    let pixels = &bytes[16..];
    let d = rows * cols;
    if pixels.len() != count * d {
        return Err(idx_err(
            images_path,
            format!("expected {} pixel bytes, found {}", count * d, pixels.len()),
        ));
    }

    let lbytes = read_all(labels_path)?;
    let mut cur = Cursor::new(lbytes.as_slice());
    let truncated = |_| idx_err(labels_path, "truncated header");
    let magic = cur.read_u32::<BigEndian>().map_err(truncated)?;
    if magic != IDX_LABELS_MAGIC {
        return Err(idx_err(labels_path, format!("bad magic {magic:#010x}")));
    }
    let n_labels = cur.read_u32::<BigEndian>().map_err(truncated)? as usize;
    if n_labels != count {
        return Err(idx_err(
            labels_path,
            format!("{n_labels} labels for {count} images"),
        ));
    }
    let labels: Vec<usize> = lbytes[8..].iter().map(|&b| b as usize).collect();
    if labels.len() != count {
        return Err(idx_err(
            labels_path,
            format!("expected {count} label bytes, found {}", labels.len()),
        ));
    }

    let features = pixels
        .chunks_exact(d.max(1))
        .map(|img| img.iter().map(|&p| p as f64 / 255.0).collect())
        .collect();
    let class_count = labels.iter().max().map_or(0, |m| m + 1);
    Dataset::new(features, labels, class_count)
}

/// Per-class sample counts.
pub fn class_histogram(dataset: &Dataset) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for s in dataset.samples() {
        *h.entry(s.label).or_default() += 1;
    }
    h
}
