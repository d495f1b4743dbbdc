//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use kcode_core::bounds::{
    kmeans_bound, nmf_bound, sparse_bound, theorem1_bound, theorem2_bound, BoundRequest, BoundScheme,
};
use kcode_core::encoders::oracle::oracle_encode;
use kcode_core::harness::{
    run_bound_curve, run_deviation_experiment, write_curve_csv, write_trials_csv, CurveSpec, DeviationConfig,
    SamplerKind, SamplerSpec,
};
use kcode_core::linalg::{adjoint, norm, norm_sq};
use kcode_core::trainers::train_pca;
use kcode_core::{empirical_risk, encode, train, SchemeKind, SchemeSpec, TrainConfig};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_scheme(kind: SchemeKind, rng: &mut ChaCha8Rng) -> (SchemeSpec, usize) {
    let k = rng.random_range(1..=3);
    let d = match kind {
        SchemeKind::Pca => rng.random_range(k..=4),
        _ => rng.random_range(1..=4),
    };
    let scheme = match kind {
        SchemeKind::Pca => SchemeSpec::pca(k),
        SchemeKind::KMeans => SchemeSpec::kmeans(k),
        SchemeKind::Nmf => SchemeSpec::nmf(k),
        SchemeKind::SparseLp => SchemeSpec::sparse(k, [1.0, 1.5, 2.0, 3.0][rng.random_range(0..4)]),
    };
    (scheme, d)
}

const KINDS: [SchemeKind; 4] = [
    SchemeKind::Pca,
    SchemeKind::KMeans,
    SchemeKind::Nmf,
    SchemeKind::SparseLp,
];

fn encoder_optimality() -> Outcome {
    let start = Instant::now();
    let mut worst = [f64::NEG_INFINITY; 4];
    let mut kmeans_exact = true;
    for (s, kind) in KINDS.into_iter().enumerate() {
        let mut r = rng(100 + s as u64);
        for _ in 0..500 {
            let (scheme, d) = random_scheme(kind, &mut r);
            let dict = random_dictionary(scheme, d, &mut r);
            let x = ball_point(d, &mut r);
            let got = encode(&dict, &x).unwrap();
            let oracle = oracle_encode(&dict, &x, 1e-3).unwrap();
            worst[s] = worst[s].max(got.error - oracle.error);
            if kind == SchemeKind::KMeans && (got.error != oracle.error || got.code != oracle.code) {
                kmeans_exact = false;
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: worst.iter().all(|&w| w <= 1e-4) && kmeans_exact && elapsed < Duration::from_secs(60),
        detail: format!(
            "max(encode − oracle) pca {:.2e}, kmeans {:.2e} (exact: {kmeans_exact}), nmf {:.2e}, sparse {:.2e}; {:.1}s",
            worst[0],
            worst[1],
            worst[2],
            worst[3],
            elapsed.as_secs_f64()
        ),
    }
}

fn nnls_code_norm() -> Outcome {
    let mut r = rng(200);
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for _ in 0..1000 {
        let k = r.random_range(1..=5);
        let d = r.random_range(1..=6);
        let dict = random_dictionary(SchemeSpec::nmf(k), d, &mut r);
        let x = ball_point(d, &mut r);
        let n = norm(encode(&dict, &x).unwrap().code.coeffs());
        worst = worst.max(n);
        if n > 1.0 + 1e-8 {
            failures += 1;
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("1000 instances, max ‖y‖ = {worst:.12}, {failures} above 1 + 1e-8"),
    }
}

fn pca_exactness() -> Outcome {
    let mut r = rng(300);
    let mut worst_tail: f64 = 0.0;
    let mut worst_point: f64 = 0.0;
    for _ in 0..50 {
        let d = r.random_range(2..=6);
        let k = r.random_range(1..d);
        let m = r.random_range(d..=60);
        let data = ball_data(m, d, &mut r);
        let dict = train_pca(&data, k).unwrap();
        // Singular values of the data matrix give the second-moment spectrum.
        let rows: Vec<f64> = data.iter().flat_map(|x| x.to_vec()).collect();
        let x = DMatrix::from_row_slice(m, d, &rows);
        let mut s2: Vec<f64> = x.singular_values().iter().map(|s| s * s / m as f64).collect();
        s2.sort_by(|a, b| b.total_cmp(a));
        let tail: f64 = s2[k..].iter().sum();
        worst_tail = worst_tail.max((empirical_risk(&dict, &data).unwrap() - tail).abs());
        for x in data.iter() {
            let proj = dict.apply(&adjoint(dict.columns(), x));
            let residual: f64 = x.iter().zip(&proj).map(|(a, b)| (a - b) * (a - b)).sum();
            let expected = norm_sq(x) - norm_sq(&proj);
            let got = encode(&dict, x).unwrap().error;
            worst_point = worst_point.max((got - expected).abs()).max((got - residual).abs());
        }
    }
    Outcome {
        pass: worst_tail <= 1e-8 && worst_point <= 1e-10,
        detail: format!("max |risk − eigen tail| {worst_tail:.2e}, max pointwise gap {worst_point:.2e}"),
    }
}

fn bound_values() -> Outcome {
    let t1 = theorem1_bound(&BoundRequest::new(1, 10_000, 0.01));
    let km = kmeans_bound(&BoundRequest::for_scheme(BoundScheme::KMeans, 2, 10_000, 0.1, None).unwrap());
    // Hand evaluation.
    let m = 1e4f64;
    let t1_hand = 6.0 * (std::f64::consts::PI / m).sqrt() + (8.0 * 100f64.ln() / m).sqrt();
    let km_hand = 2.0 * (18.0 * std::f64::consts::PI / m).sqrt() + (8.0 * 10f64.ln() / m).sqrt();
    let mut worst_sub: f64 = 0.0;
    for k in [1, 2, 3, 5, 8, 13] {
        for m in [10, 100, 1000, 10_000, 1_000_000] {
            for delta in [0.5, 0.1, 0.01, 1e-6] {
                let req = BoundRequest::for_scheme(BoundScheme::Nmf, k, m, delta, None).unwrap();
                let mut sub = BoundRequest::new(k, m, delta);
                sub.class_norm = (k as f64).sqrt();
                worst_sub = worst_sub.max((nmf_bound(&req) - theorem2_bound(&sub).unwrap()).abs());
                for p in [1.0, 1.25, 2.0, 4.0] {
                    let req = BoundRequest::for_scheme(BoundScheme::Sparse, k, m, delta, Some(p)).unwrap();
                    let mut sub = BoundRequest::new(k, m, delta);
                    sub.class_norm = (k as f64).powf(1.0 - 1.0 / p);
                    worst_sub = worst_sub.max((sparse_bound(&req).unwrap() - theorem2_bound(&sub).unwrap()).abs());
                }
            }
        }
    }
    let ok = (t1 - 0.167044).abs() <= 1e-6
        && (km - 0.193318).abs() <= 1e-6
        && (t1 - t1_hand).abs() <= 1e-12
        && (km - km_hand).abs() <= 1e-12
        && worst_sub <= 1e-12;
    Outcome {
        pass: ok,
        detail: format!("thm1 = {t1:.9}, kmeans = {km:.9}, max substitution gap {worst_sub:.1e}"),
    }
}

fn deviation_config(scheme: SchemeSpec, m: usize, trials: usize, seed: u64) -> DeviationConfig {
    DeviationConfig {
        scheme,
        sampler: SamplerSpec {
            kind: SamplerKind::ClusterMixture {
                clusters: 2,
                spread: 0.15,
                center_radius: 0.7,
            },
            d: 5,
            seed,
        },
        m,
        holdout_m: None,
        trials,
        delta: 0.05,
        bound: None,
        train: TrainConfig::default(),
        seed,
    }
}

fn deviation_validity() -> Outcome {
    let start = Instant::now();
    let km = run_deviation_experiment(&deviation_config(SchemeSpec::kmeans(2), 200, 200, 500)).unwrap();
    let sp = run_deviation_experiment(&deviation_config(SchemeSpec::sparse(2, 1.0), 200, 200, 501)).unwrap();
    let elapsed = start.elapsed();
    Outcome {
        pass: km.violation_rate <= 0.05 && sp.violation_rate <= 0.05 && elapsed < Duration::from_secs(300),
        detail: format!(
            "kmeans: rate {} (bound {:.4}, max |dev| {:.4}); sparse p=1: rate {} (bound {:.4}, max |dev| {:.4}); {:.1}s",
            km.violation_rate,
            km.bound_value,
            km.max_abs_deviation,
            sp.violation_rate,
            sp.bound_value,
            sp.max_abs_deviation,
            elapsed.as_secs_f64()
        ),
    }
}

fn scaling_law() -> Outcome {
    let small = run_deviation_experiment(&deviation_config(SchemeSpec::kmeans(2), 200, 100, 600)).unwrap();
    let large = run_deviation_experiment(&deviation_config(SchemeSpec::kmeans(2), 800, 100, 600)).unwrap();
    let ratio = small.median_abs_deviation / large.median_abs_deviation;
    Outcome {
        pass: (1.3..=3.0).contains(&ratio),
        detail: format!(
            "median |dev| m=200 {:.5}, m=800 {:.5}, ratio {ratio:.3}",
            small.median_abs_deviation, large.median_abs_deviation
        ),
    }
}

fn fmt_rise(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.1e}")
    } else {
        "single-entry traces".into()
    }
}

fn monotone_training() -> Outcome {
    let mut worst_rise = [f64::NEG_INFINITY; 4];
    for (s, kind) in KINDS.into_iter().enumerate() {
        let mut r = rng(700 + s as u64);
        for run in 0..100 {
            let d = r.random_range(2..=5);
            let k = r.random_range(1..=d.min(4));
            let m = r.random_range(20..=60);
            let data = match kind {
                SchemeKind::Nmf => nonneg_ball_data(m, d, &mut r),
                _ => ball_data(m, d, &mut r),
            };
            let scheme = match kind {
                SchemeKind::Pca => SchemeSpec::pca(k),
                SchemeKind::KMeans => SchemeSpec::kmeans(k),
                SchemeKind::Nmf => SchemeSpec::nmf(k),
                SchemeKind::SparseLp => SchemeSpec::sparse(k, r.random_range(1.0..3.0)),
            };
            let cfg = TrainConfig {
                seed: run,
                max_outer_iters: 100,
                ..TrainConfig::default()
            };
            let report = train(&scheme, &data, &cfg).unwrap();
            for w in report.risk_trace.windows(2) {
                worst_rise[s] = worst_rise[s].max(w[1] - w[0]);
            }
        }
    }
    Outcome {
        pass: worst_rise.iter().all(|&w| w <= 1e-12),
        detail: format!(
            "largest step-to-step change (positive = increase): pca {}, kmeans {}, nmf {}, sparse {}",
            fmt_rise(worst_rise[0]),
            fmt_rise(worst_rise[1]),
            fmt_rise(worst_rise[2]),
            fmt_rise(worst_rise[3])
        ),
    }
}

fn kmeans_global() -> Outcome {
    let mut r = rng(800);
    let mut hits = 0;
    for i in 0..200 {
        let data = ball_data(8, 2, &mut r);
        let optimum = exhaustive_kmeans(&data, 2);
        let cfg = TrainConfig {
            seed: i,
            restarts: 16,
            ..TrainConfig::default()
        };
        let report = train(&SchemeSpec::kmeans(2), &data, &cfg).unwrap();
        if (empirical_risk(&report.dict, &data).unwrap() - optimum).abs() <= 1e-9 {
            hits += 1;
        }
    }
    Outcome {
        pass: hits as f64 / 200.0 >= 0.95,
        detail: format!("{hits}/200 instances at the exhaustive optimum"),
    }
}

fn determinism_snapshot() -> Vec<String> {
    let mut out = Vec::new();
    let mut r = rng(900);
    let data = ball_data(40, 3, &mut r);
    let nn = nonneg_ball_data(40, 3, &mut r);
    let cfg = TrainConfig {
        seed: 5,
        restarts: 3,
        ..TrainConfig::default()
    };
    for scheme in [
        SchemeSpec::pca(2),
        SchemeSpec::kmeans(3),
        SchemeSpec::nmf(2),
        SchemeSpec::sparse(2, 1.5),
    ] {
        let d = if scheme.kind == SchemeKind::Nmf { &nn } else { &data };
        let report = train(&scheme, d, &cfg).unwrap();
        out.push(serde_json::to_string(&report).unwrap());
    }
    let exp = run_deviation_experiment(&deviation_config(SchemeSpec::kmeans(2), 50, 16, 9)).unwrap();
    let mut csv = Vec::new();
    write_trials_csv(&exp, &mut csv).unwrap();
    out.push(String::from_utf8(csv).unwrap());
    out.push(serde_json::to_string(&exp).unwrap());
    let curve = CurveSpec {
        scheme: BoundScheme::Sparse,
        ks: vec![1, 2, 4],
        ms: vec![100, 1000],
        delta: 0.05,
        p: Some(1.5),
        c: None,
        b: None,
        class_norm: None,
        d: Some(3),
    };
    let mut csv = Vec::new();
    write_curve_csv(&run_bound_curve(&curve).unwrap(), &mut csv).unwrap();
    out.push(String::from_utf8(csv).unwrap());
    out
}

fn determinism() -> Outcome {
    let a = determinism_snapshot();
    let b = determinism_snapshot();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let c = single.install(determinism_snapshot);
    Outcome {
        pass: a == b && a == c,
        detail: format!(
            "{} artifacts, repeat equal: {}, 1-thread equal: {}",
            a.len(),
            a == b,
            a == c
        ),
    }
}

fn main() -> ExitCode {
    type Check = fn() -> Outcome;
    let criteria: [(&str, Check); 9] = [
        ("encoder optimality", encoder_optimality),
        ("NNLS code norm", nnls_code_norm),
        ("PCA exactness", pca_exactness),
        ("bound values", bound_values),
        ("deviation validity", deviation_validity),
        ("scaling law", scaling_law),
        ("monotone training", monotone_training),
        ("K-means global optimality", kmeans_global),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "[{}] {}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
