//! Multi-seed experiment runner.
//!
//! An [`ExperimentSpec`] names a dataset, a split, loop settings and a list of
//! [`Variant`]s. [`run_experiment`] executes every variant once per repetition
//! and averages test accuracy per iteration into curves; [`annotation_savings`]
//! reads off how much labeling each variant needed to reach a target accuracy;
//! [`sweep_sensitivity`] varies the threshold schedule one knob at a time.
//!
//! Spec files are TOML:
//!
//! ```toml
//! variants = ["AL_RAND", "CEAL_EN", "AL_ALL"]
//! repetitions = 5
//! seed = 0
//! output = "out"
//!
//! [dataset]
//! kind = "synthetic"     # or "csv" (path = ...) or "idx" (images = ..., labels = ...)
//! classes = 4
//! per_class = 625
//! dim = 16
//! separation = 3.0
//!
//! [split]
//! train_fraction = 0.8
//! init_fraction = 0.1
//!
//! [ceal]
//! delta0 = 0.05
//! decay_rate = 0.0033
//! k = 100
//!
//! [ceal.train]
//! learning_rate = 0.05
//! epochs = 20
//! batch_size = 16
//! ```
//!
//! Every key has a default, so an empty file describes the synthetic desk benchmark.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{
    load_csv, load_idx, split, synth_gaussian_mixture, Dataset, SplitSpec, Standardizer,
};
use crate::engine::{run_simulated, write_trace, CealConfig, IterationReport};
use crate::selection::{CriterionKind, ThresholdSchedule};
use crate::{Error, Result};

/// A method under comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Variant {
    AlRand,
    AlAll,
    AlLc,
    AlMs,
    AlEn,
    CealRand,
    CealLc,
    CealMs,
    CealEn,
    CealFusion,
    Tcal,
}

impl Variant {
    pub const ALL: [Variant; 11] = [
        Variant::AlRand,
        Variant::AlAll,
        Variant::AlLc,
        Variant::AlMs,
        Variant::AlEn,
        Variant::CealRand,
        Variant::CealLc,
        Variant::CealMs,
        Variant::CealEn,
        Variant::CealFusion,
        Variant::Tcal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::AlRand => "AL_RAND",
            Variant::AlAll => "AL_ALL",
            Variant::AlLc => "AL_LC",
            Variant::AlMs => "AL_MS",
            Variant::AlEn => "AL_EN",
            Variant::CealRand => "CEAL_RAND",
            Variant::CealLc => "CEAL_LC",
            Variant::CealMs => "CEAL_MS",
            Variant::CealEn => "CEAL_EN",
            Variant::CealFusion => "CEAL_FUSION",
            Variant::Tcal => "TCAL",
        }
    }

    /// Annotation criterion and whether confident samples are pseudo-labeled.
    pub fn strategy(self) -> (CriterionKind, bool) {
        use CriterionKind::*;
        match self {
            Variant::AlRand | Variant::AlAll => (Random, false),
            Variant::AlLc => (LeastConfidence, false),
            Variant::AlMs => (Margin, false),
            Variant::AlEn => (Entropy, false),
            Variant::CealRand => (Random, true),
            Variant::CealLc => (LeastConfidence, true),
            Variant::CealMs => (Margin, true),
            Variant::CealEn => (Entropy, true),
            Variant::CealFusion => (Fusion, true),
            Variant::Tcal => (Tcal, false),
        }
    }

    /// Loop configuration for this variant derived from shared settings.
    pub fn configure(self, base: &CealConfig, seed: u64) -> CealConfig {
        let (criterion, pseudo_enabled) = self.strategy();
        CealConfig {
            criterion,
            pseudo_enabled,
            seed,
            ..base.clone()
        }
    }

    /// Fraction of each class labeled up front; AL_ALL labels everything.
    pub fn init_fraction(self, base: f64) -> f64 {
        if self == Variant::AlAll {
            1.0
        } else {
            base
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownVariant(s.to_string()))
    }
}

impl TryFrom<String> for Variant {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Variant> for String {
    fn from(v: Variant) -> String {
        v.name().to_string()
    }
}

/// Where samples come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetSource {
    Synthetic {
        #[serde(default = "default_classes")]
        classes: usize,
        #[serde(default = "default_per_class")]
        per_class: usize,
        #[serde(default = "default_dim")]
        dim: usize,
        #[serde(default = "default_separation")]
        separation: f64,
        #[serde(default)]
        seed: u64,
    },
    Csv {
        path: PathBuf,
    },
    Idx {
        images: PathBuf,
        labels: PathBuf,
    },
}

fn default_classes() -> usize {
    4
}
fn default_per_class() -> usize {
    625
}
fn default_dim() -> usize {
    16
}
fn default_separation() -> f64 {
    3.0
}

impl Default for DatasetSource {
    fn default() -> Self {
        DatasetSource::Synthetic {
            classes: default_classes(),
            per_class: default_per_class(),
            dim: default_dim(),
            separation: default_separation(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetSpec {
    #[serde(flatten)]
    pub source: DatasetSource,
    /// Directory of `<id>.png` files shown by the annotation service.
    #[serde(default)]
    pub image_dir: Option<PathBuf>,
}

impl DatasetSpec {
    pub fn load(&self) -> Result<Dataset> {
        let ds = match &self.source {
            DatasetSource::Synthetic {
                classes,
                per_class,
                dim,
                separation,
                seed,
            } => synth_gaussian_mixture(*classes, *per_class, *dim, *separation, *seed)?,
            DatasetSource::Csv { path } => load_csv(path)?,
            DatasetSource::Idx { images, labels } => load_idx(images, labels)?,
        };
        Ok(match &self.image_dir {
            Some(dir) => ds.with_image_dir(dir),
            None => ds,
        })
    }
}

/// Threshold schedule and batch size used for face identification at full scale.
pub fn cacd_preset() -> CealConfig {
    CealConfig {
        schedule: ThresholdSchedule {
            delta0: 0.05,
            decay_rate: 0.0033,
        },
        k: 2000,
        ..CealConfig::default()
    }
}

/// Threshold schedule and batch size used for object categorization at full scale.
pub fn caltech256_preset() -> CealConfig {
    CealConfig {
        schedule: ThresholdSchedule {
            delta0: 0.005,
            decay_rate: 0.00033,
        },
        k: 1000,
        ..CealConfig::default()
    }
}

fn default_variants() -> Vec<Variant> {
    vec![Variant::AlRand, Variant::CealEn, Variant::AlAll]
}
fn default_repetitions() -> usize {
    5
}
fn default_normalize() -> bool {
    true
}
fn default_relative_target() -> f64 {
    0.95
}
fn default_output() -> PathBuf {
    PathBuf::from("ceal-out")
}

/// Everything needed to reproduce a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    #[serde(default)]
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub split: SplitSpec,
    #[serde(default)]
    pub ceal: CealConfig,
    #[serde(default = "default_variants")]
    pub variants: Vec<Variant>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    /// Repetition `r` runs with seed `seed + r`.
    #[serde(default)]
    pub seed: u64,
    /// Standardize features with training-pool statistics.
    #[serde(default = "default_normalize")]
    pub normalize: bool,
    /// Absolute accuracy target for `savings.csv`; when unset, a fraction of
    /// the AL_ALL accuracy is used.
    #[serde(default)]
    pub savings_target: Option<f64>,
    #[serde(default = "default_relative_target")]
    pub savings_relative_target: f64,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        toml::from_str("").expect("every field has a default")
    }
}

impl ExperimentSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if self.variants.is_empty() {
            return Err(Error::Config("no variants requested".into()));
        }
        self.split.validate()?;
        self.ceal.validate()
    }

    /// Training pool and test set for repetition seed `seed`.
    pub fn prepare(&self, dataset: &Dataset, seed: u64) -> Result<(Dataset, Dataset)> {
        let split_spec = SplitSpec { seed, ..self.split };
        let (pool, test) = split(dataset, &split_spec)?;
        if !self.normalize {
            return Ok((pool, test));
        }
        let stats = Standardizer::fit(&pool)?;
        Ok((stats.apply(&pool)?, stats.apply(&test)?))
    }
}

/// One variant's run under one seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub variant: Variant,
    pub seed: u64,
    pub reports: Vec<IterationReport>,
}

impl Trace {
    pub fn final_accuracy(&self) -> f64 {
        self.reports.last().map_or(0.0, |r| r.test_accuracy)
    }
}

/// Mean accuracy over seeds at one iteration of one variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub variant: Variant,
    pub pct_labeled: f64,
    pub mean_accuracy: f64,
    pub stddev_accuracy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub curves: Vec<CurvePoint>,
    pub traces: Vec<Trace>,
}

impl ExperimentResult {
    /// Curve points of one variant in iteration order.
    pub fn curve(&self, variant: Variant) -> Vec<&CurvePoint> {
        self.curves
            .iter()
            .filter(|p| p.variant == variant)
            .collect()
    }

    pub fn traces_of(&self, variant: Variant) -> impl Iterator<Item = &Trace> {
        self.traces.iter().filter(move |t| t.variant == variant)
    }
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, 0.0);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Runs one variant on a prepared split.
pub fn run_variant(
    variant: Variant,
    pool: Dataset,
    test: Dataset,
    base: &CealConfig,
    init_fraction: f64,
    seed: u64,
) -> Result<Trace> {
    let config = variant.configure(base, seed);
    let engine = run_simulated(pool, test, config, variant.init_fraction(init_fraction))?;
    Ok(Trace {
        variant,
        seed,
        reports: engine.reports().to_vec(),
    })
}

/// Averages traces of each variant by iteration index.
pub fn aggregate(traces: &[Trace], variants: &[Variant]) -> Vec<CurvePoint> {
    let mut curves = Vec::new();
    for &variant in variants {
        let runs: Vec<&Trace> = traces.iter().filter(|t| t.variant == variant).collect();
        let len = runs.iter().map(|t| t.reports.len()).max().unwrap_or(0);
        for i in 0..len {
            let at: Vec<&IterationReport> = runs.iter().filter_map(|t| t.reports.get(i)).collect();
            let acc: Vec<f64> = at.iter().map(|r| r.test_accuracy).collect();
            let pct: Vec<f64> = at.iter().map(|r| r.pct_labeled).collect();
            let (mean_accuracy, stddev_accuracy) = mean_std(&acc);
            curves.push(CurvePoint {
                variant,
                pct_labeled: mean_std(&pct).0,
                mean_accuracy,
                stddev_accuracy,
            });
        }
    }
    curves
}

/// Runs every variant for every repetition.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let dataset = spec.dataset.load()?;
    let seeds: Vec<u64> = (0..spec.repetitions as u64)
        .map(|r| spec.seed + r)
        .collect();
    let splits = seeds
        .iter()
        .map(|&s| spec.prepare(&dataset, s))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(Variant, usize)> = spec
        .variants
        .iter()
        .flat_map(|&v| (0..seeds.len()).map(move |r| (v, r)))
        .collect();
    let traces = jobs
        .par_iter()
        .map(|&(variant, r)| {
            let (pool, test) = &splits[r];
            run_variant(
                variant,
                pool.clone(),
                test.clone(),
                &spec.ceal,
                spec.split.init_fraction,
                seeds[r],
            )
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExperimentResult {
        curves: aggregate(&traces, &spec.variants),
        traces,
    })
}

/// Smallest labeled fraction at which each variant's mean curve reaches
/// `target`, interpolating linearly between neighbouring points. `None` marks
/// a variant that never gets there.
pub fn annotation_savings(curves: &[CurvePoint], target: f64) -> BTreeMap<Variant, Option<f64>> {
    let mut by_variant: BTreeMap<Variant, Vec<&CurvePoint>> = BTreeMap::new();
    for p in curves {
        by_variant.entry(p.variant).or_default().push(p);
    }
    by_variant
        .into_iter()
        .map(|(variant, mut points)| {
            points.sort_by(|a, b| a.pct_labeled.total_cmp(&b.pct_labeled));
            let xs: Vec<f64> = points.iter().map(|p| p.pct_labeled).collect();
            let ys: Vec<f64> = points.iter().map(|p| p.mean_accuracy).collect();
            (variant, first_crossing(&xs, &ys, target))
        })
        .collect()
}

/// First `x` where the piecewise-linear curve through `(xs, ys)` reaches `target`.
pub fn first_crossing(xs: &[f64], ys: &[f64], target: f64) -> Option<f64> {
    let i = ys.iter().position(|&y| y >= target)?;
    if i == 0 {
        return Some(xs[0]);
    }
    let (x0, x1, y0, y1) = (xs[i - 1], xs[i], ys[i - 1], ys[i]);
    Some(x0 + (target - y0) * (x1 - x0) / (y1 - y0))
}

/// Accuracy target used for `savings.csv`.
pub fn savings_target(spec: &ExperimentSpec, result: &ExperimentResult) -> Option<f64> {
    spec.savings_target.or_else(|| {
        result
            .curve(Variant::AlAll)
            .last()
            .map(|p| spec.savings_relative_target * p.mean_accuracy)
    })
}

/// Writes `curves.csv`, one `trace-<variant>-<seed>.jsonl` per run, and
/// `savings.csv` when a target is known.
pub fn write_outputs(spec: &ExperimentSpec, result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;

    let mut curves = csv::Writer::from_path(dir.join("curves.csv")).map_err(csv_io)?;
    curves
        .write_record(["variant", "pct_labeled", "mean_acc", "std_acc"])
        .map_err(csv_io)?;
    for p in &result.curves {
        curves
            .write_record([
                p.variant.name().to_string(),
                p.pct_labeled.to_string(),
                p.mean_accuracy.to_string(),
                p.stddev_accuracy.to_string(),
            ])
            .map_err(csv_io)?;
    }
    curves.flush()?;

    for t in &result.traces {
        let path = dir.join(format!("trace-{}-{}.jsonl", t.variant, t.seed));
        let mut w = BufWriter::new(fs::File::create(path)?);
        write_trace(&t.reports, &mut w)?;
        w.flush()?;
    }

    if let Some(target) = savings_target(spec, result) {
        let mut out = csv::Writer::from_path(dir.join("savings.csv")).map_err(csv_io)?;
        out.write_record(["variant", "target_accuracy", "pct_labeled"])
            .map_err(csv_io)?;
        for (variant, pct) in annotation_savings(&result.curves, target) {
            out.write_record([
                variant.name().to_string(),
                target.to_string(),
                pct.map_or_else(|| "not reached".to_string(), |p| p.to_string()),
            ])
            .map_err(csv_io)?;
        }
        out.flush()?;
    }
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(e.into())
}

/// Mean and spread of the final accuracy for one threshold setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub delta0: f64,
    pub decay_rate: f64,
    pub mean_final_accuracy: f64,
    pub std_final_accuracy: f64,
    /// Test accuracy averaged over every iteration, then over seeds.
    pub mean_curve_accuracy: f64,
}

/// Runs CEAL_EN over a one-at-a-time grid: each `delta0` with the base decay
/// rate, then each decay rate with the base `delta0`. Duplicate cells are run once.
pub fn sweep_sensitivity(
    base: &ExperimentSpec,
    delta0_range: &[f64],
    dr_range: &[f64],
) -> Result<Vec<SweepCell>> {
    if delta0_range.is_empty() || dr_range.is_empty() {
        return Err(Error::InvalidArgument(
            "sweep ranges must be non-empty".into(),
        ));
    }
    let fixed = base.ceal.schedule;
    let mut grid: Vec<ThresholdSchedule> = Vec::new();
    let cells = delta0_range
        .iter()
        .map(|&d| ThresholdSchedule { delta0: d, ..fixed })
        .chain(dr_range.iter().map(|&r| ThresholdSchedule {
            decay_rate: r,
            ..fixed
        }));
    for cell in cells {
        cell.validate()?;
        if !grid.contains(&cell) {
            grid.push(cell);
        }
    }

    grid.iter()
        .map(|schedule| {
            let mut spec = base.clone();
            spec.variants = vec![Variant::CealEn];
            spec.ceal.schedule = *schedule;
            let result = run_experiment(&spec)?;
            let finals: Vec<f64> = result.traces.iter().map(Trace::final_accuracy).collect();
            let (mean, std) = mean_std(&finals);
            let curve_means: Vec<f64> = result
                .traces
                .iter()
                .map(|t| {
                    mean_std(
                        &t.reports
                            .iter()
                            .map(|r| r.test_accuracy)
                            .collect::<Vec<_>>(),
                    )
                    .0
                })
                .collect();
            Ok(SweepCell {
                delta0: schedule.delta0,
                decay_rate: schedule.decay_rate,
                mean_final_accuracy: mean,
                std_final_accuracy: std,
                mean_curve_accuracy: mean_std(&curve_means).0,
            })
        })
        .collect()
}

/// Standard deviation of the per-cell mean final accuracies.
pub fn sweep_spread(cells: &[SweepCell]) -> f64 {
    let means: Vec<f64> = cells.iter().map(|c| c.mean_final_accuracy).collect();
    mean_std(&means).1
}

pub fn write_sweep(cells: &[SweepCell], path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = csv::Writer::from_path(path).map_err(csv_io)?;
    w.write_record([
        "delta0",
        "decay_rate",
        "mean_final_acc",
        "std_final_acc",
        "mean_curve_acc",
    ])
    .map_err(csv_io)?;
    for c in cells {
        w.write_record([
            c.delta0.to_string(),
            c.decay_rate.to_string(),
            c.mean_final_accuracy.to_string(),
            c.std_final_accuracy.to_string(),
            c.mean_curve_accuracy.to_string(),
        ])
        .map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn point(variant: Variant, pct: f64, acc: f64) -> CurvePoint {
        CurvePoint {
            variant,
            pct_labeled: pct,
            mean_accuracy: acc,
            stddev_accuracy: 0.0,
        }
    }

    #[test]
    fn variant_names_parse() {
        for v in Variant::ALL {
            assert_eq!(v.name().parse::<Variant>().unwrap(), v);
        }
        assert!(matches!(
            "AL_BOGUS".parse::<Variant>(),
            Err(Error::UnknownVariant(_))
        ));
    }

    #[test]
    fn variant_strategies() {
        assert_eq!(Variant::CealRand.strategy(), (CriterionKind::Random, true));
        assert_eq!(Variant::AlMs.strategy(), (CriterionKind::Margin, false));
        assert_eq!(
            Variant::CealFusion.strategy(),
            (CriterionKind::Fusion, true)
        );
        assert_eq!(Variant::Tcal.strategy(), (CriterionKind::Tcal, false));
    }

    #[test]
    fn savings_interpolates() {
        let curves = vec![
            point(Variant::AlRand, 0.1, 0.5),
            point(Variant::AlRand, 0.3, 0.7),
            point(Variant::AlRand, 0.5, 0.9),
            point(Variant::AlAll, 1.0, 0.92),
        ];
        let s = annotation_savings(&curves, 0.8);
        // (0.8 - 0.7) / (0.9 - 0.7) of the way from 0.3 to 0.5
        assert_abs_diff_eq!(s[&Variant::AlRand].unwrap(), 0.4, epsilon = 1e-12);
        assert_eq!(s[&Variant::AlAll], Some(1.0));

        let s = annotation_savings(&curves, 0.92);
        assert_eq!(s[&Variant::AlAll], Some(1.0));
        assert_eq!(s[&Variant::AlRand], None);

        assert!(annotation_savings(&curves, 0.99)
            .values()
            .all(Option::is_none));
    }

    #[test]
    fn spec_defaults_and_errors() {
        let spec = ExperimentSpec::from_toml("").unwrap();
        assert_eq!(spec.repetitions, 5);
        assert_eq!(spec.ceal.k, 100);
        assert_eq!(spec.split.train_fraction, 0.8);

        let spec = ExperimentSpec::from_toml(
            "variants = [\"CEAL_MS\", \"TCAL\"]\n[ceal]\ndelta0 = 0.1\n[dataset]\nkind = \"synthetic\"\nclasses = 3\n",
        )
        .unwrap();
        assert_eq!(spec.variants, vec![Variant::CealMs, Variant::Tcal]);
        assert_eq!(spec.ceal.schedule.delta0, 0.1);
        assert_eq!(
            spec.ceal.schedule.decay_rate,
            CealConfig::default().schedule.decay_rate
        );

        assert!(ExperimentSpec::from_toml("variants = [\"NOPE\"]").is_err());
        assert!(ExperimentSpec::from_toml("repetitions = 0").is_err());
    }

    #[test]
    fn spec_toml_round_trip() {
        let spec = ExperimentSpec::default();
        let text = spec.to_toml().unwrap();
        assert_eq!(ExperimentSpec::from_toml(&text).unwrap(), spec);
    }

    #[test]
    fn mean_std_basics() {
        assert_eq!(mean_std(&[2.0]), (2.0, 0.0));
        let (m, s) = mean_std(&[1.0, 3.0]);
        assert_eq!(m, 2.0);
        assert_abs_diff_eq!(s, 2f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn presets_carry_reported_schedules() {
        assert_eq!(
            cacd_preset().schedule,
            ThresholdSchedule {
                delta0: 0.05,
                decay_rate: 0.0033
            }
        );
        assert_eq!(cacd_preset().k, 2000);
        assert_eq!(caltech256_preset().schedule.delta0, 0.005);
        assert_eq!(caltech256_preset().k, 1000);
    }
}
