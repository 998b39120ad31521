use std::fs;

use ceal::harness::{
    annotation_savings, first_crossing, run_experiment, sweep_sensitivity, sweep_spread,
    write_outputs, write_sweep, CurvePoint, DatasetSource, ExperimentSpec, Variant,
};
use ceal::Error;

fn quick_spec(variants: &[Variant]) -> ExperimentSpec {
    let mut spec = ExperimentSpec::from_toml(
        r#"
        repetitions = 2
        [dataset]
        kind = "synthetic"
        classes = 3
        per_class = 60
        dim = 4
        [ceal]
        k = 20
        [ceal.train]
        epochs = 5
        "#,
    )
    .unwrap();
    spec.variants = variants.to_vec();
    spec
}

#[test]
fn documented_spec_parses() {
    let text = r#"
variants = ["AL_RAND", "CEAL_EN", "AL_ALL"]
repetitions = 5
seed = 0
output = "out"

[dataset]
kind = "synthetic"
classes = 4
per_class = 625
dim = 16
separation = 3.0

[split]
train_fraction = 0.8
init_fraction = 0.1

[ceal]
delta0 = 0.05
decay_rate = 0.0033
k = 100

[ceal.train]
learning_rate = 0.05
epochs = 20
batch_size = 16
"#;
    let spec = ExperimentSpec::from_toml(text).unwrap();
    assert_eq!(
        spec,
        ExperimentSpec {
            output: "out".into(),
            ..ExperimentSpec::default()
        }
    );
    let back = ExperimentSpec::from_toml(&spec.to_toml().unwrap()).unwrap();
    assert_eq!(back, spec);
}

#[test]
fn default_benchmark_has_a_2000_sample_pool() {
    let spec = ExperimentSpec::default();
    let DatasetSource::Synthetic {
        classes,
        dim,
        separation,
        ..
    } = spec.dataset.source
    else {
        panic!("default dataset is synthetic");
    };
    assert_eq!((classes, dim, separation), (4, 16, 3.0));
    let data = spec.dataset.load().unwrap();
    let (pool, _) = spec.prepare(&data, 0).unwrap();
    assert_eq!(pool.len(), 2000);
    assert_eq!((spec.ceal.k, spec.repetitions), (100, 5));
}

#[test]
fn unknown_variant_is_rejected() {
    let err = ExperimentSpec::from_toml(r#"variants = ["AL_RAND", "CEAL_XYZ"]"#).unwrap_err();
    assert!(matches!(err, Error::Config(msg) if msg.contains("CEAL_XYZ")));
}

#[test]
fn al_all_is_a_single_point_at_full_labeling() {
    let result = run_experiment(&quick_spec(&[Variant::AlAll])).unwrap();
    let curve = result.curve(Variant::AlAll);
    assert_eq!(curve.len(), 1);
    assert_eq!(curve[0].pct_labeled, 1.0);
}

#[test]
fn outputs_are_reproducible() {
    let spec = quick_spec(&[Variant::AlRand, Variant::CealMs, Variant::AlAll]);
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    write_outputs(&spec, &run_experiment(&spec).unwrap(), a.path()).unwrap();
    write_outputs(&spec, &run_experiment(&spec).unwrap(), b.path()).unwrap();

    let mut names: Vec<String> = fs::read_dir(a.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 2 + 3 * 2);
    assert!(names.contains(&"trace-CEAL_MS-1.jsonl".to_string()));
    for name in &names {
        assert_eq!(
            fs::read(a.path().join(name)).unwrap(),
            fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
    let curves = fs::read_to_string(a.path().join("curves.csv")).unwrap();
    assert_eq!(
        curves.lines().next().unwrap(),
        "variant,pct_labeled,mean_acc,std_acc"
    );
}

#[test]
fn crossing_interpolates_linearly() {
    let curve = |v, pts: &[(f64, f64)]| -> Vec<CurvePoint> {
        pts.iter()
            .map(|&(x, y)| CurvePoint {
                variant: v,
                pct_labeled: x,
                mean_accuracy: y,
                stddev_accuracy: 0.0,
            })
            .collect()
    };
    let mut points = curve(Variant::CealEn, &[(0.1, 0.5), (0.2, 0.7), (0.3, 0.9)]);
    points.extend(curve(Variant::AlRand, &[(0.1, 0.5), (0.2, 0.6)]));
    let savings = annotation_savings(&points, 0.8);
    // halfway between 0.7 and 0.9
    assert!((savings[&Variant::CealEn].unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(savings[&Variant::AlRand], None);
    assert_eq!(first_crossing(&[0.1, 0.2], &[0.9, 0.95], 0.8), Some(0.1));
}

#[test]
fn single_cell_sweep() {
    let spec = quick_spec(&[Variant::CealEn]);
    let cells = sweep_sensitivity(&spec, &[0.05], &[0.0033]).unwrap();
    assert_eq!(cells.len(), 1);
    assert_eq!(sweep_spread(&cells), 0.0);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    write_sweep(&cells, &path).unwrap();
    assert_eq!(fs::read_to_string(path).unwrap().lines().count(), 2);
}

#[test]
fn zero_decay_keeps_threshold_constant() {
    let mut spec = quick_spec(&[Variant::CealEn]);
    spec.ceal.schedule.decay_rate = 0.0;
    let result = run_experiment(&spec).unwrap();
    for t in &result.traces {
        assert!(t
            .reports
            .iter()
            .all(|r| r.delta == spec.ceal.schedule.delta0));
    }
}

#[test]
fn every_variant_runs() {
    let result = run_experiment(&quick_spec(&Variant::ALL)).unwrap();
    for v in Variant::ALL {
        assert!(!result.curve(v).is_empty(), "{v}");
        assert_eq!(result.traces_of(v).count(), 2);
    }
}

/// Results of the default benchmark shared by the slower checks below.
fn default_run(variants: &[Variant]) -> ceal::harness::ExperimentResult {
    let spec = ExperimentSpec {
        variants: variants.to_vec(),
        ..ExperimentSpec::default()
    };
    run_experiment(&spec).unwrap()
}

#[test]
fn ceal_en_keeps_up_with_random_from_20_percent() {
    // Once both curves plateau they differ by test-set noise; 0.005 is
    // 2.5 of the 500 test samples.
    const NOISE: f64 = 0.005;
    let result = default_run(&[Variant::AlRand, Variant::CealEn]);
    let ceal = result.curve(Variant::CealEn);
    let rand = result.curve(Variant::AlRand);
    assert_eq!(ceal.len(), rand.len());
    let mut strictly_ahead = 0;
    for (c, r) in ceal.iter().zip(&rand) {
        assert_eq!(c.pct_labeled, r.pct_labeled);
        if c.pct_labeled < 0.2 - 1e-9 {
            continue;
        }
        assert!(
            c.mean_accuracy + NOISE >= r.mean_accuracy,
            "at {}: {} vs {}",
            c.pct_labeled,
            c.mean_accuracy,
            r.mean_accuracy
        );
        strictly_ahead += usize::from(c.mean_accuracy > r.mean_accuracy);
    }
    assert!(strictly_ahead >= 5);
}

#[test]
fn full_runs_converge_near_al_all() {
    let result = default_run(&[
        Variant::AlRand,
        Variant::CealEn,
        Variant::CealMs,
        Variant::AlAll,
    ]);
    let reference = result.curve(Variant::AlAll)[0].mean_accuracy;
    for v in [Variant::AlRand, Variant::CealEn, Variant::CealMs] {
        let last = *result.curve(v).last().unwrap();
        assert_eq!(last.pct_labeled, 1.0);
        assert!(
            (last.mean_accuracy - reference).abs() < 0.02,
            "{v}: {} vs {reference}",
            last.mean_accuracy
        );
    }
}

#[test]
fn wide_threshold_band_barely_moves_accuracy() {
    let spec = ExperimentSpec::default();
    let cells =
        sweep_sensitivity(&spec, &[0.045, 0.06, 0.075, 0.1], &[0.001, 0.002, 0.0035]).unwrap();
    assert_eq!(cells.len(), 7);
    assert!(sweep_spread(&cells) < 0.03);
}
