//! Random instance generators shared by the integration and acceptance tests.
#![allow(dead_code)]

use kcode_core::linalg::{dot, gram_schmidt, norm};
use kcode_core::{Dataset, Dictionary, SchemeKind, SchemeSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn gaussian(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

pub fn unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let g = gaussian(dim, rng);
        let n = norm(&g);
        if n > 1e-9 {
            return g.into_iter().map(|v| v / n).collect();
        }
    }
}

pub fn ball_point(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let r = rng.random::<f64>().powf(1.0 / dim as f64);
    unit(dim, rng).into_iter().map(|v| v * r).collect()
}

pub fn ball_data(m: usize, dim: usize, rng: &mut ChaCha8Rng) -> Dataset {
    Dataset::from_rows((0..m).map(|_| ball_point(dim, rng)).collect()).unwrap()
}

pub fn nonneg_ball_data(m: usize, dim: usize, rng: &mut ChaCha8Rng) -> Dataset {
    let rows = (0..m)
        .map(|_| ball_point(dim, rng).into_iter().map(f64::abs).collect())
        .collect();
    Dataset::from_rows(rows).unwrap()
}

pub fn orthonormal(dim: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let raw: Vec<Vec<f64>> = (0..k).map(|_| gaussian(dim, rng)).collect();
        if let Some(q) = gram_schmidt(&raw) {
            return q;
        }
    }
}

/// Unit columns with pairwise nonnegative inner products. Half the time the
/// entries themselves are nonnegative; otherwise signed columns are drawn
/// until the inner products happen to be nonnegative.
pub fn nmf_columns(dim: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    if rng.random_bool(0.5) {
        return (0..k)
            .map(|_| unit(dim, rng).into_iter().map(f64::abs).collect())
            .collect();
    }
    loop {
        let cols: Vec<Vec<f64>> = (0..k).map(|_| unit(dim, rng)).collect();
        let ok = (0..k).all(|i| (i + 1..k).all(|j| dot(&cols[i], &cols[j]) >= 0.0));
        if ok {
            return cols;
        }
    }
}

pub fn random_dictionary(scheme: SchemeSpec, dim: usize, rng: &mut ChaCha8Rng) -> Dictionary {
    let k = scheme.k;
    let columns = match scheme.kind {
        SchemeKind::Pca => orthonormal(dim, k, rng),
        SchemeKind::KMeans => (0..k).map(|_| ball_point(dim, rng)).collect(),
        SchemeKind::Nmf => nmf_columns(dim, k, rng),
        SchemeKind::SparseLp => (0..k)
            .map(|_| {
                let r = rng.random_range(0.2..1.0);
                unit(dim, rng).into_iter().map(|v| v * r).collect()
            })
            .collect(),
    };
    Dictionary::new(scheme, columns).unwrap()
}

/// Exhaustive K-means optimum over all assignments of the points to `k`
/// labelled clusters (centers at cluster means, empty clusters allowed).
pub fn exhaustive_kmeans(data: &Dataset, k: usize) -> f64 {
    let m = data.len();
    let d = data.dim();
    let total = k.pow(m as u32);
    let mut best = f64::INFINITY;
    let mut labels = vec![0usize; m];
    for mut code in 0..total {
        for l in labels.iter_mut() {
            *l = code % k;
            code /= k;
        }
        let mut cost = 0.0;
        for c in 0..k {
            let members: Vec<&[f64]> = data
                .iter()
                .zip(&labels)
                .filter(|(_, &l)| l == c)
                .map(|(x, _)| &x[..])
                .collect();
            if members.is_empty() {
                continue;
            }
            let mut mean = vec![0.0; d];
            for x in &members {
                mean.iter_mut().zip(x.iter()).for_each(|(a, b)| *a += b);
            }
            mean.iter_mut().for_each(|v| *v /= members.len() as f64);
            cost += members
                .iter()
                .map(|x| x.iter().zip(&mean).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .sum::<f64>();
        }
        best = best.min(cost / m as f64);
    }
    best
}
