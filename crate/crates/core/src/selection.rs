//! Sample scoring and selection.
//!
//! Three uncertainty scores rank the unlabeled pool for annotation:
//!
//! | criterion | score                    | most uncertain |
//! |-----------|--------------------------|----------------|
//! | LC        | `max_j p_j`              | lowest         |
//! | MS        | `p_(1) - p_(2)`          | lowest         |
//! | EN        | `-sum_j p_j ln p_j`      | highest        |
//!
//! High-confidence samples (entropy strictly below the current threshold) are
//! pseudo-labeled with their arg-max class. All tie-breaking is by ascending
//! sample id so every selection is reproducible.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::model::ProbabilityVector;
use crate::rng::seeded;
use crate::{Error, Result, SampleId};

/// Predicted class distributions of the samples under consideration.
pub type ScoredPool = BTreeMap<SampleId, ProbabilityVector>;

/// Annotation selection strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CriterionKind {
    #[serde(rename = "LC")]
    LeastConfidence,
    #[serde(rename = "MS")]
    Margin,
    #[serde(rename = "EN")]
    Entropy,
    #[serde(rename = "RAND")]
    Random,
    #[serde(rename = "FUSION")]
    Fusion,
    #[serde(rename = "TCAL")]
    Tcal,
}

impl CriterionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::LeastConfidence => "LC",
            Self::Margin => "MS",
            Self::Entropy => "EN",
            Self::Random => "RAND",
            Self::Fusion => "FUSION",
            Self::Tcal => "TCAL",
        }
    }
}

impl fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_uppercase().as_str() {
            "LC" => Self::LeastConfidence,
            "MS" => Self::Margin,
            "EN" => Self::Entropy,
            "RAND" => Self::Random,
            "FUSION" => Self::Fusion,
            "TCAL" => Self::Tcal,
            _ => return Err(Error::InvalidArgument(format!("unknown criterion `{s}`"))),
        })
    }
}

/// A sample's score under one criterion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyScore {
    pub sample_id: SampleId,
    pub criterion: CriterionKind,
    pub value: f64,
}

/// Probability of the most probable class.
pub fn score_lc(probs: &[f64]) -> f64 {
    probs.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

/// Gap between the two most probable classes.
pub fn score_ms(probs: &[f64]) -> Result<f64> {
    if probs.len() < 2 {
        return Err(Error::InvalidArgument(
            "margin needs at least two classes".into(),
        ));
    }
    let (mut first, mut second) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &p in probs {
        if p > first {
            second = first;
            first = p;
        } else if p > second {
            second = p;
        }
    }
    Ok(first - second)
}

/// Shannon entropy in nats, with `0 ln 0 = 0`.
pub fn score_en(probs: &[f64]) -> f64 {
    let h: f64 = probs
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.ln())
        .sum();
    // a one-hot vector sums to -0.0
    h.max(0.0)
}

/// Scores every sample and orders them most-uncertain first.
///
/// Only the three score-based criteria are accepted.
pub fn rank(pool: &ScoredPool, criterion: CriterionKind) -> Result<Vec<UncertaintyScore>> {
    let ascending = match criterion {
        CriterionKind::LeastConfidence | CriterionKind::Margin => true,
        CriterionKind::Entropy => false,
        other => {
            return Err(Error::InvalidArgument(format!(
                "{other} does not define a ranking score"
            )))
        }
    };
    let mut scores = pool
        .iter()
        .map(|(&sample_id, probs)| {
            let value = match criterion {
                CriterionKind::LeastConfidence => score_lc(probs),
                CriterionKind::Margin => score_ms(probs)?,
                _ => score_en(probs),
            };
            Ok(UncertaintyScore {
                sample_id,
                criterion,
                value,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    scores.sort_by(|a, b| {
        let by_value = if ascending {
            a.value.total_cmp(&b.value)
        } else {
            b.value.total_cmp(&a.value)
        };
        by_value.then(a.sample_id.cmp(&b.sample_id))
    });
    Ok(scores)
}

/// The `k` most informative samples, or a seeded uniform draw for
/// [`CriterionKind::Random`]. Returns the whole pool when `k` exceeds it.
pub fn select_informative(
    pool: &ScoredPool,
    criterion: CriterionKind,
    k: usize,
    seed: u64,
) -> Result<Vec<SampleId>> {
    if pool.is_empty() {
        return Err(Error::Empty("unlabeled pool"));
    }
    let k = k.min(pool.len());
    if criterion == CriterionKind::Random {
        let ids: Vec<SampleId> = pool.keys().copied().collect();
        let mut rng = seeded(seed);
        return Ok(index::sample(&mut rng, ids.len(), k)
            .into_iter()
            .map(|i| ids[i])
            .collect());
    }
    Ok(rank(pool, criterion)?
        .into_iter()
        .take(k)
        .map(|s| s.sample_id)
        .collect())
}

/// A transient label assigned to a confidently predicted sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoLabel {
    pub sample_id: SampleId,
    pub label: usize,
    pub entropy_at_assignment: f64,
}

/// Every sample with entropy strictly below `delta`, labeled with its arg-max class.
pub fn select_high_confidence(pool: &ScoredPool, delta: f64) -> Vec<PseudoLabel> {
    pool.iter()
        .filter_map(|(&sample_id, probs)| {
            let entropy = score_en(probs);
            (entropy < delta).then(|| PseudoLabel {
                sample_id,
                label: probs.argmax(),
                entropy_at_assignment: entropy,
            })
        })
        .collect()
}

/// Linear decay of the pseudo-labeling threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ThresholdSchedule {
    pub delta0: f64,
    pub decay_rate: f64,
}

impl Default for ThresholdSchedule {
    fn default() -> Self {
        Self {
            delta0: 0.05,
            decay_rate: 0.0033,
        }
    }
}

impl ThresholdSchedule {
    pub fn new(delta0: f64, decay_rate: f64) -> Result<Self> {
        let schedule = Self { delta0, decay_rate };
        schedule.validate()?;
        Ok(schedule)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta0.is_finite() && self.delta0 > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "delta0 must be positive, got {}",
                self.delta0
            )));
        }
        if !(self.decay_rate.is_finite() && self.decay_rate >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "decay rate must be non-negative, got {}",
                self.decay_rate
            )));
        }
        Ok(())
    }

    /// Threshold after `events` completed fine-tuning passes.
    pub fn at(&self, events: usize) -> f64 {
        update_threshold(self, events)
    }
}

/// `max(0, delta0 - dr * index)`.
pub fn update_threshold(schedule: &ThresholdSchedule, finetune_event_index: usize) -> f64 {
    (schedule.delta0 - schedule.decay_rate * finetune_event_index as f64).max(0.0)
}

/// Number of ids each criterion contributes to the fusion union.
pub fn fusion_share(k: usize) -> usize {
    (k / 2).max(1)
}

/// Union of the top-`k/2` lists of LC, MS and EN, then a seeded draw of `k` from it.
///
/// Returns the whole union (ascending ids) when it has at most `k` members.
pub fn fuse_select(pool: &ScoredPool, k: usize, seed: u64) -> Result<Vec<SampleId>> {
    if pool.is_empty() {
        return Err(Error::Empty("unlabeled pool"));
    }
    let share = fusion_share(k);
    let mut union = BTreeSet::new();
    for criterion in [
        CriterionKind::LeastConfidence,
        CriterionKind::Margin,
        CriterionKind::Entropy,
    ] {
        union.extend(select_informative(pool, criterion, share, seed)?);
    }
    let union: Vec<SampleId> = union.into_iter().collect();
    if union.len() <= k {
        return Ok(union);
    }
    let mut rng = seeded(seed);
    let mut picked: Vec<SampleId> = index::sample(&mut rng, union.len(), k)
        .into_iter()
        .map(|i| union[i])
        .collect();
    picked.sort_unstable();
    Ok(picked)
}

const KMEANS_MAX_ITERS: usize = 100;

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best_d {
            best = c;
            best_d = d;
        }
    }
    best
}

/// Lloyd's k-means over `points` (all distinct), returning the cluster of each point.
fn kmeans(points: &[&[f64]], k: usize, seed: u64) -> Vec<usize> {
    let mut rng = seeded(seed);
    let mut centroids: Vec<Vec<f64>> = index::sample(&mut rng, points.len(), k)
        .into_iter()
        .map(|i| points[i].to_vec())
        .collect();
    let mut assign: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
    let dim = points[0].len();

    for _ in 0..KMEANS_MAX_ITERS {
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (p, &c) in points.iter().zip(&assign) {
            counts[c] += 1;
            for (s, v) in sums[c].iter_mut().zip(p.iter()) {
                *s += v;
            }
        }
        let mut taken = BTreeSet::new();
        for c in 0..k {
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
                continue;
            }
            // Empty cluster: re-seed on the point farthest from its own centroid.
            let far = (0..points.len())
                .filter(|i| !taken.contains(i))
                .max_by(|&a, &b| {
                    let da = sq_dist(points[a], &centroids[assign[a]]);
                    let db = sq_dist(points[b], &centroids[assign[b]]);
                    da.total_cmp(&db).then(b.cmp(&a))
                });
            if let Some(i) = far {
                taken.insert(i);
                centroids[c] = points[i].to_vec();
            }
        }
        let next: Vec<usize> = points.iter().map(|p| nearest(p, &centroids)).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    assign
}

/// Triple-criteria baseline: margin uncertainty, k-means diversity, density.
///
/// Takes the `n_uncertain` lowest-margin samples, clusters their features into
/// `n_select` groups, and returns the member of each cluster with the smallest
/// mean Euclidean distance to its cluster-mates. Duplicate feature vectors are
/// collapsed to their lowest id first; if fewer distinct points than
/// `n_select` remain, those points are returned.
pub fn tcal_select(
    pool: &ScoredPool,
    features: &BTreeMap<SampleId, &[f64]>,
    n_uncertain: usize,
    n_select: usize,
    seed: u64,
) -> Result<Vec<SampleId>> {
    if pool.is_empty() {
        return Err(Error::Empty("unlabeled pool"));
    }
    if n_select == 0 || n_select > n_uncertain {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= n_select ({n_select}) <= n_uncertain ({n_uncertain})"
        )));
    }
    let uncertain = select_informative(pool, CriterionKind::Margin, n_uncertain, seed)?;

    let mut ids: Vec<SampleId> = Vec::with_capacity(uncertain.len());
    let mut points: Vec<&[f64]> = Vec::with_capacity(uncertain.len());
    let mut sorted = uncertain;
    sorted.sort_unstable();
    for id in sorted {
        let x = *features
            .get(&id)
            .ok_or_else(|| Error::InvalidArgument(format!("no features for sample {id}")))?;
        if !points.contains(&x) {
            ids.push(id);
            points.push(x);
        }
    }
    if points.len() <= n_select {
        return Ok(ids);
    }

    let assign = kmeans(&points, n_select, seed);
    let mut chosen = Vec::with_capacity(n_select);
    for c in 0..n_select {
        let members: Vec<usize> = (0..points.len()).filter(|&i| assign[i] == c).collect();
        let density = |i: usize| -> f64 {
            if members.len() == 1 {
                return 0.0;
            }
            let total: f64 = members
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| sq_dist(points[i], points[j]).sqrt())
                .sum();
            total / (members.len() - 1) as f64
        };
        // members are in ascending id order, so min_by keeps the lowest id on ties
        let best = members.iter().copied().min_by(|&a, &b| {
            density(a)
                .partial_cmp(&density(b))
                .unwrap_or(Ordering::Equal)
        });
        if let Some(i) = best {
            chosen.push(ids[i]);
        }
    }
    chosen.sort_unstable();
    Ok(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pv(v: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn least_confidence_examples() {
        assert_abs_diff_eq!(score_lc(&[0.25; 4]), 0.25);
        assert_abs_diff_eq!(score_lc(&[0.0, 0.0, 1.0]), 1.0);
        assert_abs_diff_eq!(score_lc(&[0.6, 0.3, 0.1]), 0.6);
    }

    #[test]
    fn margin_examples() {
        assert_abs_diff_eq!(score_ms(&[0.5, 0.5]).unwrap(), 0.0);
        assert_abs_diff_eq!(score_ms(&[0.6, 0.3, 0.1]).unwrap(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(score_ms(&[0.0, 1.0, 0.0]).unwrap(), 1.0);
        assert!(score_ms(&[1.0]).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_abs_diff_eq!(score_en(&[0.25; 4]), 4f64.ln(), epsilon = 1e-12);
        assert_eq!(score_en(&[0.0, 1.0, 0.0]), 0.0);
        assert_abs_diff_eq!(
            score_en(&[0.5, 0.25, 0.25]),
            1.5 * 2f64.ln(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn entropy_top_two() {
        // entropies a=0.1-ish, b=high, c=middle
        let mut pool = ScoredPool::new();
        pool.insert(0, pv(&[0.99, 0.005, 0.005]));
        pool.insert(1, pv(&[0.34, 0.33, 0.33]));
        pool.insert(2, pv(&[0.6, 0.3, 0.1]));
        assert_eq!(
            select_informative(&pool, CriterionKind::Entropy, 2, 0).unwrap(),
            vec![1, 2]
        );
        assert_eq!(
            select_informative(&pool, CriterionKind::Entropy, 10, 0).unwrap(),
            vec![1, 2, 0]
        );
    }

    #[test]
    fn ties_break_by_id() {
        let pool: ScoredPool = (0..5).map(|i| (10 - i, pv(&[0.5, 0.5]))).collect();
        assert_eq!(
            select_informative(&pool, CriterionKind::Margin, 3, 0).unwrap(),
            vec![6, 7, 8]
        );
    }

    #[test]
    fn empty_pool_is_an_error() {
        let pool = ScoredPool::new();
        assert!(select_informative(&pool, CriterionKind::Entropy, 1, 0).is_err());
        assert!(fuse_select(&pool, 2, 0).is_err());
    }

    #[test]
    fn random_selection_is_seeded_without_replacement() {
        let pool: ScoredPool = (0..50).map(|i| (i, pv(&[0.5, 0.5]))).collect();
        let a = select_informative(&pool, CriterionKind::Random, 10, 42).unwrap();
        let b = select_informative(&pool, CriterionKind::Random, 10, 42).unwrap();
        assert_eq!(a, b);
        let unique: BTreeSet<_> = a.iter().collect();
        assert_eq!(unique.len(), 10);
    }

    #[test]
    fn zero_threshold_selects_nothing() {
        let pool: ScoredPool = [(0, pv(&[1.0, 0.0])), (1, pv(&[0.5, 0.5]))].into();
        assert!(select_high_confidence(&pool, 0.0).is_empty());
        let picked = select_high_confidence(&pool, 1e-6);
        assert_eq!(picked.len(), 1);
        assert_eq!(picked[0].sample_id, 0);
        assert_eq!(picked[0].label, 0);
    }

    #[test]
    fn threshold_schedule_values() {
        let cacd = ThresholdSchedule::new(0.05, 0.0033).unwrap();
        assert_eq!(update_threshold(&cacd, 0), 0.05);
        assert_eq!(update_threshold(&cacd, 100), 0.0);
        let caltech = ThresholdSchedule::new(0.005, 0.00033).unwrap();
        assert_abs_diff_eq!(update_threshold(&caltech, 1), 0.00467, epsilon = 1e-15);
        assert!(ThresholdSchedule::new(0.0, 0.1).is_err());
        assert!(ThresholdSchedule::new(0.1, -0.1).is_err());
    }

    #[test]
    fn fusion_full_overlap_returns_union() {
        // Two clearly uncertain samples lead every criterion.
        let mut pool: ScoredPool = (0..10).map(|i| (i, pv(&[0.97, 0.02, 0.01]))).collect();
        pool.insert(3, pv(&[0.34, 0.33, 0.33]));
        pool.insert(7, pv(&[0.4, 0.35, 0.25]));
        assert_eq!(fuse_select(&pool, 4, 1).unwrap(), vec![3, 7]);
    }

    #[test]
    fn fusion_draws_from_union() {
        // LC, MS and EN disagree on these vectors.
        let pool: ScoredPool = [
            (0, pv(&[0.5, 0.5, 0.0])),
            (1, pv(&[0.49, 0.49, 0.02])),
            (2, pv(&[0.4, 0.3, 0.3])),
            (3, pv(&[0.36, 0.32, 0.32])),
            (4, pv(&[0.9, 0.05, 0.05])),
            (5, pv(&[0.95, 0.04, 0.01])),
        ]
        .into();
        let mut union = BTreeSet::new();
        for c in [
            CriterionKind::LeastConfidence,
            CriterionKind::Margin,
            CriterionKind::Entropy,
        ] {
            union.extend(select_informative(&pool, c, 2, 0).unwrap());
        }
        let picked = fuse_select(&pool, 2, 5).unwrap();
        assert_eq!(picked.len(), 2);
        assert!(picked.iter().all(|id| union.contains(id)));
    }

    #[test]
    fn tcal_with_equal_sizes_returns_top_margin() {
        let pool: ScoredPool = (0..8)
            .map(|i| {
                let p = 0.5 + 0.05 * i as f64;
                (i, pv(&[p, 1.0 - p]))
            })
            .collect();
        let feats: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64, 0.0]).collect();
        let map: BTreeMap<SampleId, &[f64]> =
            feats.iter().enumerate().map(|(i, f)| (i, &f[..])).collect();
        assert_eq!(tcal_select(&pool, &map, 3, 3, 7).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn tcal_collapses_duplicate_points() {
        let pool: ScoredPool = (0..4).map(|i| (i, pv(&[0.5, 0.5]))).collect();
        let x = [1.0, 1.0];
        let map: BTreeMap<SampleId, &[f64]> = (0..4).map(|i| (i, &x[..])).collect();
        assert_eq!(tcal_select(&pool, &map, 4, 2, 0).unwrap(), vec![0]);
    }

    #[test]
    fn tcal_rejects_bad_sizes() {
        let pool: ScoredPool = (0..4).map(|i| (i, pv(&[0.5, 0.5]))).collect();
        let x = [1.0];
        let map: BTreeMap<SampleId, &[f64]> = (0..4).map(|i| (i, &x[..])).collect();
        assert!(tcal_select(&pool, &map, 2, 3, 0).is_err());
    }

    #[test]
    fn criterion_names_round_trip() {
        for c in [
            CriterionKind::LeastConfidence,
            CriterionKind::Margin,
            CriterionKind::Entropy,
            CriterionKind::Random,
            CriterionKind::Fusion,
            CriterionKind::Tcal,
        ] {
            assert_eq!(c.as_str().parse::<CriterionKind>().unwrap(), c);
        }
    }
}
