//! Scores a handful of probability vectors under each criterion and shows which
//! samples go to the annotator and which get pseudo-labels.
//!
//! ```bash
//! cargo run -p ceal --example uncertainty_scores
//! ```

use ceal::model::ProbabilityVector;
use ceal::selection::{
    fuse_select, score_en, score_lc, score_ms, select_high_confidence, select_informative,
    CriterionKind, ScoredPool, ThresholdSchedule,
};

fn main() -> ceal::Result<()> {
    let rows = [
        vec![0.34, 0.33, 0.33],
        vec![0.50, 0.45, 0.05],
        vec![0.70, 0.20, 0.10],
        vec![0.90, 0.05, 0.05],
        vec![0.995, 0.004, 0.001],
        vec![0.001, 0.998, 0.001],
    ];
    let pool: ScoredPool = rows
        .into_iter()
        .enumerate()
        .map(|(id, p)| Ok((id, ProbabilityVector::new(p)?)))
        .collect::<ceal::Result<_>>()?;

    println!("id  probabilities          LC      MS      EN");
    for (id, p) in &pool {
        println!(
            "{id:>2}  {:<22} {:.3}   {:.3}   {:.3}",
            format!("{:?}", p.as_ref()),
            score_lc(p),
            score_ms(p)?,
            score_en(p)
        );
    }

    for c in [
        CriterionKind::LeastConfidence,
        CriterionKind::Margin,
        CriterionKind::Entropy,
        CriterionKind::Random,
    ] {
        println!("{c:<5} top 2 -> {:?}", select_informative(&pool, c, 2, 42)?);
    }
    println!("FUSION 2 -> {:?}", fuse_select(&pool, 2, 42)?);

    let schedule = ThresholdSchedule::new(0.05, 0.0033)?;
    for events in [0, 5, 10, 15] {
        let delta = schedule.at(events);
        let picked: Vec<(usize, usize)> = select_high_confidence(&pool, delta)
            .iter()
            .map(|p| (p.sample_id, p.label))
            .collect();
        println!(
            "after {events:>2} fine-tunes delta {delta:.4}: pseudo-labels (id, class) {picked:?}"
        );
    }
    Ok(())
}
