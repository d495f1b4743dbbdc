mod common;

use kcode_core::bounds::{bound_report, BoundName, BoundRequest, BoundScheme};
use kcode_core::harness::*;
use kcode_core::{load_dataset, Dictionary, Error, SchemeSpec, TrainConfig};
use std::io::Write;

#[test]
fn curve_cell_matches_bounds_module() {
    let spec = CurveSpec {
        scheme: BoundScheme::Nmf,
        ks: vec![3],
        ms: vec![777],
        delta: 0.02,
        p: None,
        c: None,
        b: None,
        class_norm: None,
        d: None,
    };
    let rows = run_bound_curve(&spec).unwrap();
    let req = BoundRequest::for_scheme(BoundScheme::Nmf, 3, 777, 0.02, None).unwrap();
    let report = bound_report(&req, BoundScheme::Nmf).unwrap();
    assert_eq!(rows.len(), report.applicable().len());
    for row in rows {
        assert_eq!(Some(row.value), report.get(row.bound_name));
    }
}

#[test]
fn exactly_codable_planted_data_has_no_deviation() {
    let cfg = DeviationConfig {
        scheme: SchemeSpec::kmeans(3),
        sampler: SamplerSpec {
            kind: SamplerKind::PlantedDictionary {
                scheme: SchemeSpec::kmeans(3),
                noise: 0.0,
            },
            d: 4,
            seed: 2,
        },
        m: 60,
        holdout_m: None,
        trials: 6,
        delta: 0.1,
        bound: None,
        train: TrainConfig {
            restarts: 4,
            ..TrainConfig::default()
        },
        seed: 3,
    };
    let result = run_deviation_experiment(&cfg).unwrap();
    assert_eq!(result.holdout_m, 1200);
    for o in &result.outcomes {
        assert!(o.training_risk.abs() < 1e-12 && o.holdout_risk.abs() < 1e-12, "{o:?}");
    }
    assert_eq!(result.violation_rate, 0.0);
}

#[test]
fn config_json_with_defaults() {
    let text = r#"{
        "scheme": {"kind": "sparse", "K": 2, "p": 1.0},
        "sampler": {"kind": "uniform_ball", "d": 3, "seed": 4},
        "m": 30, "trials": 3, "delta": 0.05, "bound": "thm2"
    }"#;
    let cfg: DeviationConfig = serde_json::from_str(text).unwrap();
    assert_eq!(cfg.holdout_size(), 600);
    let result = run_deviation_experiment(&cfg).unwrap();
    assert_eq!(result.bound_name, BoundName::Thm2);
    assert_eq!(result.deviations.len(), 3);
    let json = serde_json::to_value(&result).unwrap();
    assert_eq!(json["K"], 2);
}

#[test]
fn pca_bound_name_mismatch() {
    let text = r#"{
        "scheme": {"kind": "pca", "K": 1},
        "sampler": {"kind": "uniform_ball", "d": 3},
        "m": 30, "trials": 2, "delta": 0.05, "bound": "nmf"
    }"#;
    let cfg: DeviationConfig = serde_json::from_str(text).unwrap();
    assert!(matches!(
        run_deviation_experiment(&cfg),
        Err(Error::SchemeBoundMismatch(_))
    ));
}

#[test]
fn dataset_files_and_dictionary_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("data.csv");
    std::fs::File::create(&csv).unwrap().write_all(b"2, 0\n0, 1\n").unwrap();
    let ds = load_dataset(&csv, true).unwrap();
    assert_eq!(ds.points()[0].coords(), &[1.0, 0.0]);
    assert_eq!(ds.points()[1].coords(), &[0.0, 0.5]);
    assert!(matches!(
        load_dataset(&csv, false),
        Err(Error::OutsideUnitBall { index: 0, .. })
    ));

    let jsonl = dir.path().join("data.jsonl");
    std::fs::write(&jsonl, "[0.1, 0.2]\n[0.3, -0.4]\n").unwrap();
    assert_eq!(load_dataset(&jsonl, false).unwrap().len(), 2);

    let dict = Dictionary::new(SchemeSpec::sparse(2, 1.5), vec![vec![0.5, 0.0], vec![0.0, 1.0]]).unwrap();
    let path = dir.path().join("dict.json");
    dict.save_json(&path).unwrap();
    assert_eq!(Dictionary::load_json(&path).unwrap(), dict);
}
