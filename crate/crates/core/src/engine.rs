//! The active-learning loop.
//!
//! An [`Engine`] owns the partition of the training pool into unlabeled,
//! labeled and (transiently) pseudo-labeled samples, plus the current model.
//! Every step is split in two so that a human annotator can sit in the middle:
//!
//! 1. [`Engine::pending`] computes the next batch of sample ids needing labels.
//!    It is a pure function of the engine state and may be called repeatedly.
//! 2. [`Engine::submit`] applies a complete set of labels for that batch, then
//!    pseudo-labels, fine-tunes, decays the threshold and records a report.
//!
//! [`Engine::step`] glues the two together around an [`Oracle`].
//!
//! Ground-truth labels of the pool are read only by [`SimulatedOracle`] and by
//! the pseudo-label error metric; selection and training see oracle answers and
//! model probabilities only.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{class_quota, Dataset};
use crate::model::{sgd_finetune, Architecture, Labeled, ModelParams, TrainConfig};
use crate::rng::{derive_seed, seeded};
use crate::selection::{
    fuse_select, score_en, score_lc, score_ms, select_high_confidence, select_informative,
    tcal_select, CriterionKind, PseudoLabel, ScoredPool, ThresholdSchedule,
};
use crate::{Error, Result, SampleId};

const STREAM_INIT_PICK: u64 = 1;
const STREAM_INIT_PARAMS: u64 = 2;
const STREAM_FINETUNE: u64 = 3;
const STREAM_SELECT: u64 = 4;

/// Source of labels for queried samples.
pub trait Oracle {
    fn label(&mut self, sample_id: SampleId) -> Result<usize>;
}

/// Answers with the ground truth stored in the dataset.
#[derive(Debug, Clone, Copy)]
pub struct SimulatedOracle<'a> {
    pool: &'a Dataset,
}

impl<'a> SimulatedOracle<'a> {
    pub fn new(pool: &'a Dataset) -> Self {
        Self { pool }
    }
}

impl Oracle for SimulatedOracle<'_> {
    fn label(&mut self, sample_id: SampleId) -> Result<usize> {
        self.pool
            .sample(sample_id)
            .map(|s| s.label)
            .ok_or_else(|| Error::Oracle(format!("unknown sample {sample_id}")))
    }
}

impl<F> Oracle for F
where
    F: FnMut(SampleId) -> Result<usize>,
{
    fn label(&mut self, sample_id: SampleId) -> Result<usize> {
        self(sample_id)
    }
}

/// Partition of the training pool.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PoolState {
    pub unlabeled: BTreeSet<SampleId>,
    pub labeled: BTreeMap<SampleId, usize>,
    pub pseudo: BTreeMap<SampleId, PseudoLabel>,
}

impl PoolState {
    fn fresh(pool_size: usize) -> Self {
        Self {
            unlabeled: (0..pool_size).collect(),
            ..Self::default()
        }
    }

    /// Checks the between-iteration invariants: no pseudo-labels remain and
    /// unlabeled/labeled partition `0..pool_size`.
    pub fn check(&self, pool_size: usize) -> Result<()> {
        if !self.pseudo.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{} pseudo-labels outlived their iteration",
                self.pseudo.len()
            )));
        }
        if self.unlabeled.len() + self.labeled.len() != pool_size {
            return Err(Error::InvalidArgument(format!(
                "{} unlabeled + {} labeled != pool of {pool_size}",
                self.unlabeled.len(),
                self.labeled.len()
            )));
        }
        if let Some(id) = self.labeled.keys().find(|id| self.unlabeled.contains(id)) {
            return Err(Error::InvalidArgument(format!(
                "sample {id} is both labeled and unlabeled"
            )));
        }
        Ok(())
    }
}

/// Knobs of the loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CealConfig {
    #[serde(flatten)]
    pub schedule: ThresholdSchedule,
    /// Samples sent for annotation per iteration.
    pub k: usize,
    /// Iteration cap; `None` runs until the unlabeled pool is exhausted.
    pub max_iterations: Option<usize>,
    /// Fine-tune every `finetune_interval` iterations.
    pub finetune_interval: usize,
    pub criterion: CriterionKind,
    pub pseudo_enabled: bool,
    pub train: TrainConfig,
    /// Initial training used on the first labeled set; defaults to `train`.
    pub init_train: Option<TrainConfig>,
    pub hidden: Vec<usize>,
    /// TCAL clusters the `factor * k` lowest-margin samples.
    pub tcal_uncertain_factor: usize,
    pub seed: u64,
}

impl Default for CealConfig {
    fn default() -> Self {
        Self {
            schedule: ThresholdSchedule::default(),
            k: 100,
            max_iterations: None,
            finetune_interval: 1,
            criterion: CriterionKind::Entropy,
            pseudo_enabled: true,
            train: TrainConfig::default(),
            init_train: None,
            hidden: Vec::new(),
            tcal_uncertain_factor: 4,
            seed: 0,
        }
    }
}

impl CealConfig {
    /// Seed of the initial weights.
    pub fn param_seed(&self) -> u64 {
        derive_seed(self.seed, STREAM_INIT_PARAMS, 0)
    }

    /// Seed of the shuffling used when training after `iteration`; 0 is the
    /// initial training.
    pub fn finetune_seed(&self, iteration: usize) -> u64 {
        derive_seed(self.seed, STREAM_FINETUNE, iteration as u64)
    }

    pub fn validate(&self) -> Result<()> {
        self.schedule.validate()?;
        self.train.validate()?;
        if let Some(init) = &self.init_train {
            init.validate()?;
        }
        if self.k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::InvalidArgument(
                "max_iterations must be at least 1".into(),
            ));
        }
        if self.finetune_interval == 0 {
            return Err(Error::InvalidArgument(
                "finetune_interval must be at least 1".into(),
            ));
        }
        if self.tcal_uncertain_factor == 0 {
            return Err(Error::InvalidArgument(
                "tcal_uncertain_factor must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// Metrics recorded after initialization (iteration 0) and after every iteration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationReport {
    pub iteration: usize,
    pub pct_labeled: f64,
    pub test_accuracy: f64,
    pub pseudo_count: usize,
    pub pseudo_error_rate: f64,
    /// Threshold in force after this iteration's update.
    pub delta: f64,
    pub annotations_cumulative: usize,
}

/// Writes one JSON report per line.
pub fn write_trace<W: Write>(reports: &[IterationReport], mut w: W) -> Result<()> {
    for r in reports {
        serde_json::to_writer(&mut w, r).map_err(std::io::Error::from)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_trace<R: BufRead>(r: R) -> Result<Vec<IterationReport>> {
    r.lines()
        .enumerate()
        .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()))
        .map(|(i, line)| {
            serde_json::from_str(&line?).map_err(|e| Error::Parse {
                path: "<trace>".into(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

/// Fraction of pseudo-labels that disagree with the ground truth; 0 when empty.
pub fn pseudo_error_rate<'a, I>(pseudo: I, truth: impl Fn(SampleId) -> usize) -> f64
where
    I: IntoIterator<Item = &'a PseudoLabel>,
{
    let (mut total, mut wrong) = (0usize, 0usize);
    for p in pseudo {
        total += 1;
        if p.label != truth(p.sample_id) {
            wrong += 1;
        }
    }
    if total == 0 {
        0.0
    } else {
        wrong as f64 / total as f64
    }
}

/// What a pending batch is for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QueryKind {
    /// Stratified seed set that initializes the model.
    Initialization,
    /// Informative samples selected by the configured criterion.
    Annotation,
}

/// A batch of samples awaiting labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub kind: QueryKind,
    pub iteration: usize,
    pub sample_ids: Vec<SampleId>,
    /// Criterion score per id: the configured score for LC/MS/EN, entropy
    /// otherwise, and `NaN` for the initialization batch.
    pub scores: Vec<f64>,
}

/// The loop state.
#[derive(Debug, Clone)]
pub struct Engine {
    pool: Dataset,
    test: Dataset,
    config: CealConfig,
    init_fraction: f64,
    state: PoolState,
    params: Option<ModelParams>,
    iteration: usize,
    finetune_events: usize,
    reports: Vec<IterationReport>,
}

impl Engine {
    /// Creates an engine over a training pool and a held-out test set.
    pub fn new(
        pool: Dataset,
        test: Dataset,
        config: CealConfig,
        init_fraction: f64,
    ) -> Result<Self> {
        config.validate()?;
        if !(init_fraction > 0.0 && init_fraction <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "init_fraction must be in (0, 1], got {init_fraction}"
            )));
        }
        if pool.dim() != test.dim() {
            return Err(Error::DimensionMismatch {
                expected: pool.dim(),
                actual: test.dim(),
            });
        }
        if test.class_count() > pool.class_count() {
            return Err(Error::InvalidArgument(
                "test set has classes the pool does not".into(),
            ));
        }
        if let Some(class) = pool.ids_by_class().iter().position(Vec::is_empty) {
            return Err(Error::InvalidArgument(format!(
                "class {class} has no samples in the pool"
            )));
        }
        let state = PoolState::fresh(pool.len());
        Ok(Self {
            pool,
            test,
            config,
            init_fraction,
            state,
            params: None,
            iteration: 0,
            finetune_events: 0,
            reports: Vec::new(),
        })
    }

    pub fn pool(&self) -> &Dataset {
        &self.pool
    }

    pub fn test_set(&self) -> &Dataset {
        &self.test
    }

    pub fn config(&self) -> &CealConfig {
        &self.config
    }

    pub fn state(&self) -> &PoolState {
        &self.state
    }

    /// Current model; `None` before initialization.
    pub fn params(&self) -> Option<&ModelParams> {
        self.params.as_ref()
    }

    pub fn reports(&self) -> &[IterationReport] {
        &self.reports
    }

    pub fn iteration(&self) -> usize {
        self.iteration
    }

    pub fn finetune_events(&self) -> usize {
        self.finetune_events
    }

    pub fn current_delta(&self) -> f64 {
        self.config.schedule.at(self.finetune_events)
    }

    pub fn is_initialized(&self) -> bool {
        self.params.is_some()
    }

    pub fn is_finished(&self) -> bool {
        self.is_initialized()
            && (self.state.unlabeled.is_empty()
                || self
                    .config
                    .max_iterations
                    .is_some_and(|t| self.iteration >= t))
    }

    fn architecture(&self) -> Architecture {
        Architecture {
            input_dim: self.pool.dim(),
            class_count: self.pool.class_count(),
            hidden: self.config.hidden.clone(),
        }
    }

    /// Stratified random `init_fraction` of each class, ascending ids.
    fn initial_ids(&self) -> Vec<SampleId> {
        let mut rng = seeded(derive_seed(self.config.seed, STREAM_INIT_PICK, 0));
        let mut ids = Vec::new();
        for class_ids in self.pool.ids_by_class() {
            let n = class_quota(class_ids.len(), self.init_fraction, 1, 0);
            ids.extend(
                rand::seq::index::sample(&mut rng, class_ids.len(), n)
                    .into_iter()
                    .map(|i| class_ids[i]),
            );
        }
        ids.sort_unstable();
        ids
    }

    /// Model probabilities for every unlabeled sample.
    pub fn score_unlabeled(&self) -> Result<ScoredPool> {
        let params = self
            .params
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("engine is not initialized".into()))?;
        self.score(params, &self.state.unlabeled)
    }

    fn score(&self, params: &ModelParams, ids: &BTreeSet<SampleId>) -> Result<ScoredPool> {
        let ids: Vec<SampleId> = ids.iter().copied().collect();
        let scored = ids
            .par_iter()
            .map(|&id| Ok((id, params.forward_probs(self.pool.features(id))?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(scored.into_iter().collect())
    }

    /// The next batch needing labels, or `None` once the run is finished.
    pub fn pending(&self) -> Result<Option<Query>> {
        if !self.is_initialized() {
            let ids = self.initial_ids();
            let scores = vec![f64::NAN; ids.len()];
            return Ok(Some(Query {
                kind: QueryKind::Initialization,
                iteration: 0,
                sample_ids: ids,
                scores,
            }));
        }
        if self.is_finished() {
            return Ok(None);
        }
        let iteration = self.iteration + 1;
        let scored = self.score_unlabeled()?;
        let ids = self.select(&scored, iteration)?;
        let criterion = self.config.criterion;
        let scores = ids
            .iter()
            .map(|id| {
                let p = &scored[id];
                Ok(match criterion {
                    CriterionKind::LeastConfidence => score_lc(p),
                    CriterionKind::Margin => score_ms(p)?,
                    _ => score_en(p),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(Query {
            kind: QueryKind::Annotation,
            iteration,
            sample_ids: ids,
            scores,
        }))
    }

    fn select(&self, scored: &ScoredPool, iteration: usize) -> Result<Vec<SampleId>> {
        let cfg = &self.config;
        let seed = derive_seed(cfg.seed, STREAM_SELECT, iteration as u64);
        match cfg.criterion {
            CriterionKind::Fusion => fuse_select(scored, cfg.k, seed),
            CriterionKind::Tcal => {
                let n_uncertain = (cfg.k * cfg.tcal_uncertain_factor).min(scored.len());
                let n_select = cfg.k.min(n_uncertain);
                let features: BTreeMap<SampleId, &[f64]> = scored
                    .keys()
                    .map(|&id| (id, self.pool.features(id)))
                    .collect();
                tcal_select(scored, &features, n_uncertain, n_select, seed)
            }
            c => select_informative(scored, c, cfg.k, seed),
        }
    }

    fn check_labels(&self, query: &Query, labels: &BTreeMap<SampleId, usize>) -> Result<()> {
        let m = self.pool.class_count();
        if labels.len() != query.sample_ids.len()
            || query.sample_ids.iter().any(|id| !labels.contains_key(id))
        {
            return Err(Error::InvalidArgument(
                "labels must cover exactly the pending batch".into(),
            ));
        }
        if let Some(&label) = labels.values().find(|&&l| l >= m) {
            return Err(Error::LabelOutOfRange {
                label,
                class_count: m,
            });
        }
        Ok(())
    }

    /// Applies labels for the current pending batch and advances the loop.
    ///
    /// Nothing is mutated if the labels are rejected.
    pub fn submit(&mut self, labels: &BTreeMap<SampleId, usize>) -> Result<&IterationReport> {
        let query = self
            .pending()?
            .ok_or_else(|| Error::InvalidArgument("run is finished".into()))?;
        self.check_labels(&query, labels)?;
        match query.kind {
            QueryKind::Initialization => self.complete_initialization(labels)?,
            QueryKind::Annotation => self.complete_iteration(labels)?,
        }
        Ok(self.reports.last().expect("a report was just pushed"))
    }

    /// Labeled samples then pseudo-labeled ones, each in id order.
    fn training_set<'a>(&'a self, state: &'a PoolState) -> Vec<Labeled<'a>> {
        state
            .labeled
            .iter()
            .map(|(&id, &y)| (self.pool.features(id), y))
            .chain(
                state
                    .pseudo
                    .values()
                    .map(|p| (self.pool.features(p.sample_id), p.label)),
            )
            .collect()
    }

    fn complete_initialization(&mut self, labels: &BTreeMap<SampleId, usize>) -> Result<()> {
        let mut state = self.state.clone();
        for (&id, &y) in labels {
            state.unlabeled.remove(&id);
            state.labeled.insert(id, y);
        }
        let start = ModelParams::init(&self.architecture(), self.config.param_seed());
        let mut train = self
            .config
            .init_train
            .clone()
            .unwrap_or_else(|| self.config.train.clone());
        train.seed = self.config.finetune_seed(0);
        let set: Vec<Labeled<'_>> = state
            .labeled
            .iter()
            .map(|(&id, &y)| (self.pool.features(id), y))
            .collect();
        let params = sgd_finetune(&start, &set, &train)?;
        let test_accuracy = params.accuracy(self.test.labeled())?;

        self.state = state;
        self.params = Some(params);
        self.reports.push(IterationReport {
            iteration: 0,
            pct_labeled: self.state.labeled.len() as f64 / self.pool.len() as f64,
            test_accuracy,
            pseudo_count: 0,
            pseudo_error_rate: 0.0,
            delta: self.current_delta(),
            annotations_cumulative: self.state.labeled.len(),
        });
        Ok(())
    }

    fn complete_iteration(&mut self, labels: &BTreeMap<SampleId, usize>) -> Result<()> {
        let iteration = self.iteration + 1;
        let delta = self.current_delta();
        let params = self.params.as_ref().expect("initialized");
        let mut state = self.state.clone();

        for (&id, &y) in labels {
            state.unlabeled.remove(&id);
            state.labeled.insert(id, y);
        }

        if self.config.pseudo_enabled && !state.unlabeled.is_empty() {
            let remaining = self.score(params, &state.unlabeled)?;
            state.pseudo = select_high_confidence(&remaining, delta)
                .into_iter()
                .map(|p| (p.sample_id, p))
                .collect();
        }
        let pseudo_count = state.pseudo.len();
        let error_rate =
            pseudo_error_rate(state.pseudo.values(), |id| self.pool.samples()[id].label);

        let mut finetune_events = self.finetune_events;
        let params = if iteration.is_multiple_of(self.config.finetune_interval) {
            let mut train = self.config.train.clone();
            train.seed = self.config.finetune_seed(iteration);
            finetune_events += 1;
            sgd_finetune(params, &self.training_set(&state), &train)?
        } else {
            params.clone()
        };
        state.pseudo.clear();
        let test_accuracy = params.accuracy(self.test.labeled())?;

        let report = IterationReport {
            iteration,
            pct_labeled: state.labeled.len() as f64 / self.pool.len() as f64,
            test_accuracy,
            pseudo_count,
            pseudo_error_rate: error_rate,
            delta: self.config.schedule.at(finetune_events),
            annotations_cumulative: state.labeled.len(),
        };
        self.state = state;
        self.params = Some(params);
        self.finetune_events = finetune_events;
        self.iteration = iteration;
        self.reports.push(report);
        Ok(())
    }

    /// Runs one batch through `oracle`. Returns `None` when the run is finished.
    ///
    /// An oracle failure leaves the engine untouched.
    pub fn step(&mut self, oracle: &mut dyn Oracle) -> Result<Option<&IterationReport>> {
        let Some(query) = self.pending()? else {
            return Ok(None);
        };
        let labels = query
            .sample_ids
            .iter()
            .map(|&id| Ok((id, oracle.label(id)?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        self.submit(&labels).map(Some)
    }

    /// Initializes and iterates until the pool is exhausted or the cap is hit.
    pub fn run(&mut self, oracle: &mut dyn Oracle) -> Result<&[IterationReport]> {
        while self.step(oracle)?.is_some() {}
        Ok(&self.reports)
    }
}

/// Runs a full loop against the ground truth of `pool`.
pub fn run_simulated(
    pool: Dataset,
    test: Dataset,
    config: CealConfig,
    init_fraction: f64,
) -> Result<Engine> {
    let truth = pool.clone();
    let mut engine = Engine::new(pool, test, config, init_fraction)?;
    engine.run(&mut SimulatedOracle::new(&truth))?;
    Ok(engine)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{split, synth_gaussian_mixture, SplitSpec};

    fn small(seed: u64) -> (Dataset, Dataset) {
        let ds = synth_gaussian_mixture(4, 125, 4, 3.0, seed).unwrap();
        split(
            &ds,
            &SplitSpec {
                seed,
                ..SplitSpec::default()
            },
        )
        .unwrap()
    }

    fn cfg() -> CealConfig {
        CealConfig {
            k: 40,
            ..CealConfig::default()
        }
    }

    fn label(p: SampleId, id: SampleId) -> PseudoLabel {
        PseudoLabel {
            sample_id: id,
            label: p,
            entropy_at_assignment: 0.0,
        }
    }

    #[test]
    fn error_rate_counts() {
        assert_eq!(pseudo_error_rate(&[], |_| 0), 0.0);
        let all_right: Vec<_> = (0..4).map(|i| label(0, i)).collect();
        assert_eq!(pseudo_error_rate(&all_right, |_| 0), 0.0);
        assert_eq!(pseudo_error_rate(&all_right, |_| 1), 1.0);
        let mixed: Vec<_> = (0..10).map(|i| label(usize::from(i < 3), i)).collect();
        assert!((pseudo_error_rate(&mixed, |_| 0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn init_is_stratified() {
        let ds = synth_gaussian_mixture(4, 100, 3, 3.0, 0).unwrap();
        let (_, test) = split(&ds, &SplitSpec::default()).unwrap();
        let mut engine = Engine::new(ds.clone(), test, cfg(), 0.1).unwrap();
        let q = engine.pending().unwrap().unwrap();
        assert_eq!(q.kind, QueryKind::Initialization);
        let mut per_class = [0usize; 4];
        for id in &q.sample_ids {
            per_class[ds.samples()[*id].label] += 1;
        }
        assert_eq!(per_class, [10; 4]);
        engine.step(&mut SimulatedOracle::new(&ds)).unwrap();
        assert_eq!(engine.state().labeled.len(), 40);
    }

    #[test]
    fn full_init_fraction_finishes_immediately() {
        let (pool, test) = small(1);
        let n = pool.len();
        let engine = run_simulated(pool, test, cfg(), 1.0).unwrap();
        assert_eq!(engine.reports().len(), 1);
        assert_eq!(engine.state().labeled.len(), n);
        assert_eq!(engine.reports()[0].pct_labeled, 1.0);
    }

    #[test]
    fn random_annotation_grows_by_k() {
        let (pool, test) = small(2);
        let truth = pool.clone();
        let config = CealConfig {
            criterion: CriterionKind::Random,
            pseudo_enabled: false,
            ..cfg()
        };
        let mut engine = Engine::new(pool, test, config, 0.1).unwrap();
        let mut oracle = SimulatedOracle::new(&truth);
        engine.step(&mut oracle).unwrap();
        let before = engine.state().labeled.len();
        let report = engine.step(&mut oracle).unwrap().unwrap().clone();
        assert_eq!(engine.state().labeled.len(), before + 40);
        assert_eq!(report.pseudo_count, 0);
    }

    #[test]
    fn failing_oracle_leaves_state_untouched() {
        let (pool, test) = small(3);
        let truth = pool.clone();
        let mut engine = Engine::new(pool, test, cfg(), 0.1).unwrap();
        engine.step(&mut SimulatedOracle::new(&truth)).unwrap();
        let snapshot = (
            engine.state().clone(),
            engine.params().cloned(),
            engine.reports().len(),
        );
        let mut calls = 0;
        let mut flaky = |id: SampleId| {
            calls += 1;
            if calls > 3 {
                Err(Error::Oracle("annotator went home".into()))
            } else {
                Ok(truth.samples()[id].label)
            }
        };
        assert!(engine.step(&mut flaky).is_err());
        assert_eq!(
            snapshot,
            (
                engine.state().clone(),
                engine.params().cloned(),
                engine.reports().len()
            )
        );
    }

    #[test]
    fn submit_rejects_partial_or_foreign_labels() {
        let (pool, test) = small(4);
        let mut engine = Engine::new(pool, test, cfg(), 0.1).unwrap();
        let q = engine.pending().unwrap().unwrap();
        let mut labels: BTreeMap<_, _> = q.sample_ids.iter().map(|&id| (id, 0)).collect();
        let first = q.sample_ids[0];
        labels.remove(&first);
        assert!(engine.submit(&labels).is_err());
        labels.insert(first, 99);
        assert!(matches!(
            engine.submit(&labels),
            Err(Error::LabelOutOfRange { .. })
        ));
        assert!(!engine.is_initialized());
    }

    #[test]
    fn config_validation() {
        assert!(CealConfig { k: 0, ..cfg() }.validate().is_err());
        assert!(CealConfig {
            finetune_interval: 0,
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(CealConfig {
            max_iterations: Some(0),
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(cfg().validate().is_ok());
    }

    #[test]
    fn trace_round_trip() {
        let (pool, test) = small(5);
        let engine = run_simulated(
            pool,
            test,
            CealConfig {
                max_iterations: Some(2),
                ..cfg()
            },
            0.1,
        )
        .unwrap();
        let mut buf = Vec::new();
        write_trace(engine.reports(), &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text
            .lines()
            .next()
            .unwrap()
            .starts_with("{\"iteration\":0,\"pct_labeled\":"));
        assert_eq!(read_trace(&buf[..]).unwrap(), engine.reports());
    }
}
