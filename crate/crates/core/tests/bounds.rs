use kcode_core::bounds::*;

const MS: [usize; 7] = [10, 100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];

fn all_bounds(k: usize, m: usize, delta: f64) -> Vec<(&'static str, f64)> {
    let nmf = BoundRequest::for_scheme(BoundScheme::Nmf, k, m, delta, None).unwrap();
    let sparse = BoundRequest::for_scheme(BoundScheme::Sparse, k, m, delta, Some(1.5)).unwrap();
    let mut fd = BoundRequest::new(k, m, delta);
    fd.d = Some(10);
    let km = BoundRequest::for_scheme(BoundScheme::KMeans, k, m, delta, None).unwrap();
    vec![
        ("thm1", theorem1_bound(&BoundRequest::new(k, m, delta))),
        ("thm2", theorem2_bound(&BoundRequest::new(k, m, delta)).unwrap()),
        ("kmeans", kmeans_bound(&km)),
        ("nmf", nmf_bound(&nmf)),
        ("sparse", sparse_bound(&sparse).unwrap()),
        ("finite_dim", finite_dim_bound(&fd).unwrap()),
        ("pca", pca_bound(&BoundRequest::new(k, m, delta))),
    ]
}

#[test]
fn monotone_in_m_k_and_delta() {
    for k in [1, 2, 5] {
        for delta in [0.3, 0.05] {
            for w in MS.windows(2) {
                let (a, b) = (all_bounds(k, w[0], delta), all_bounds(k, w[1], delta));
                for ((name, x), (_, y)) in a.iter().zip(&b) {
                    assert!(y < x, "{name} not decreasing in m at K={k}, m={}", w[0]);
                }
            }
        }
    }
    for m in [100, 10_000] {
        let (a, b) = (all_bounds(2, m, 0.1), all_bounds(3, m, 0.1));
        for ((name, x), (_, y)) in a.iter().zip(&b) {
            assert!(y > x, "{name} not increasing in K at m={m}");
        }
        let (a, b) = (all_bounds(2, m, 0.1), all_bounds(2, m, 0.01));
        for ((name, x), (_, y)) in a.iter().zip(&b) {
            assert!(y > x, "{name} not increasing as delta shrinks at m={m}");
        }
    }
}

#[test]
fn class_norm_bound_hand_value() {
    let req = BoundRequest::new(1, 100, 0.5);
    let hand = 0.1 * (14.0 + 0.5 * 1600f64.ln().sqrt()) + (2f64.ln() / 200.0).sqrt();
    let got = theorem2_bound(&req).unwrap();
    assert!((got - hand).abs() < 1e-12);
    assert!((got - 1.5947).abs() < 1e-3);
}

#[test]
fn kmeans_limits() {
    let req = BoundRequest::for_scheme(BoundScheme::KMeans, 1, 400, 1.0 - 1e-15, None).unwrap();
    assert!((kmeans_bound(&req) - (18.0 * std::f64::consts::PI / 400.0).sqrt()).abs() < 1e-7);
    let a = kmeans_bound(&BoundRequest::for_scheme(BoundScheme::KMeans, 3, 1000, 0.1, None).unwrap());
    let b = kmeans_bound(&BoundRequest::for_scheme(BoundScheme::KMeans, 3, 4000, 0.1, None).unwrap());
    assert!((a / b - 2.0).abs() < 1e-12);
}

#[test]
fn scheme_bound_hand_values() {
    // Second independent evaluation of the NMF and sparse displays.
    let (k, m, delta) = (4.0f64, 1e6f64, 0.05f64);
    let hand =
        (k / m.sqrt()) * (14.0 * k.sqrt() + 0.5 * (16.0 * m * k).ln().sqrt()) + ((1.0 / delta).ln() / (2.0 * m)).sqrt();
    let req = BoundRequest::for_scheme(BoundScheme::Nmf, 4, 1_000_000, 0.05, None).unwrap();
    assert!((nmf_bound(&req) - hand).abs() < 1e-12);

    let (k, m, delta, p) = (3.0f64, 1e4f64, 0.1f64, 2.0f64);
    let n = k.powf(1.0 - 1.0 / p);
    let hand =
        (k / m.sqrt()) * (14.0 * n + 0.5 * (16.0 * m * n * n).ln().sqrt()) + ((1.0 / delta).ln() / (2.0 * m)).sqrt();
    let req = BoundRequest::for_scheme(BoundScheme::Sparse, 3, 10_000, 0.1, Some(p)).unwrap();
    assert!((sparse_bound(&req).unwrap() - hand).abs() < 1e-12);

    let nmf1 = nmf_bound(&BoundRequest::for_scheme(BoundScheme::Nmf, 1, 500, 0.1, None).unwrap());
    let sp1 = sparse_bound(&BoundRequest::for_scheme(BoundScheme::Sparse, 1, 500, 0.1, Some(1.0)).unwrap()).unwrap();
    assert_eq!(nmf1, sp1);
}

#[test]
fn sparse_best_at_p_one() {
    for k in 2..8 {
        for m in [100, 10_000, 1_000_000] {
            let at =
                |p| sparse_bound(&BoundRequest::for_scheme(BoundScheme::Sparse, k, m, 0.05, Some(p)).unwrap()).unwrap();
            assert!(at(1.0) <= at(2.0));
        }
    }
}

#[test]
fn finite_dim_properties() {
    let mut req = BoundRequest::new(3, 1000, 0.1);
    req.d = Some(4);
    req.b = 0.0;
    assert!((finite_dim_bound(&req).unwrap() - 8.0 / 1000f64.sqrt()).abs() < 1e-15);
    req.d = None;
    assert!(finite_dim_bound(&req).is_err());

    for k in [1, 3, 8] {
        for d in [2, 10, 100] {
            for m in [10_000, 100_000, 1_000_000] {
                let eval = |m| {
                    let mut r = BoundRequest::new(k, m, 0.05);
                    r.d = Some(d);
                    finite_dim_bound(&r).unwrap()
                };
                let ratio = eval(m) / eval(4 * m);
                assert!((1.9..=2.1).contains(&ratio), "K={k} d={d} m={m}: {ratio}");
            }
        }
    }
}

#[test]
fn finite_dim_crossover_matches_pointwise_comparison() {
    for k in [1, 4, 16] {
        for d in [1, 10, 1000, 100_000] {
            for m in [100, 10_000] {
                let mut req = BoundRequest::new(k, m, 0.05);
                req.d = Some(d);
                let report = bound_report(&req, BoundScheme::Custom).unwrap();
                let fd = report.finite_dim.unwrap();
                let tightest_is_fd = report.tightest == BoundName::FiniteDim;
                let min_other = report
                    .applicable()
                    .into_iter()
                    .filter(|(n, _)| *n != BoundName::FiniteDim)
                    .map(|(_, v)| v)
                    .fold(f64::INFINITY, f64::min);
                assert_eq!(tightest_is_fd, fd < min_other);
            }
        }
    }
}

#[test]
fn kmeans_bound_beats_operator_norm_bound_on_grid() {
    for k in 1..=20 {
        for m in [1, 10, 100, 10_000, 1_000_000] {
            for delta in [0.5, 0.05, 1e-4] {
                let req = BoundRequest::for_scheme(BoundScheme::KMeans, k, m, delta, None).unwrap();
                let report = bound_report(&req, BoundScheme::KMeans).unwrap();
                assert!(report.thm4_kmeans.unwrap() < report.thm1, "K={k} m={m} δ={delta}");
            }
        }
    }
}

#[test]
fn pca_rademacher_values() {
    assert!((pca_rademacher(4, 400) - 0.2).abs() < 1e-15);
    assert_eq!(pca_rademacher(1, 1), 2.0);
    assert!((pca_rademacher(9, 10_000) - 0.06).abs() < 1e-15);
}

#[test]
fn report_json_round_trip() {
    let req = BoundRequest::for_scheme(BoundScheme::Sparse, 3, 5000, 0.05, Some(1.5)).unwrap();
    let report = bound_report(&req, BoundScheme::Sparse).unwrap();
    let text = serde_json::to_string(&report).unwrap();
    let back: BoundReport = serde_json::from_str(&text).unwrap();
    assert_eq!(report, back);
    assert!(report.applicable().iter().all(|(_, v)| *v >= 0.0));
}
