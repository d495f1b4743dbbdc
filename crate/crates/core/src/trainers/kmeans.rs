use rand_chacha::ChaCha8Rng;

use super::{
    best_of_restarts, clip_norm, distinct_points, gaussian_unit, relative_decrease, Init, TrainConfig, TrainReport,
};
use crate::data::Dataset;
use crate::dictionary::Dictionary;
use crate::encoders::kmeans::nearest_center;
use crate::scheme::SchemeSpec;
use crate::{Error, Result};

/// Lloyd's algorithm with centers constrained to the ball of radius `c`.
///
/// Each iteration assigns points to their nearest center, moves each center
/// to its cluster mean and projects it radially onto the ball. An empty
/// cluster is reseeded at the point with the largest current error. Stops
/// when assignments are stable or the relative risk decrease is below `tol`.
pub fn train_kmeans(data: &Dataset, k: usize, c: f64, cfg: &TrainConfig) -> Result<TrainReport> {
    let scheme = SchemeSpec::kmeans_capped(k, c);
    scheme.validate()?;
    cfg.validate()?;
    if cfg.init == Init::RandomData && k > data.len() {
        return Err(Error::DegenerateInit {
            k,
            available: data.len(),
        });
    }
    best_of_restarts(cfg, |rng| lloyd(data, &scheme, cfg, rng))
}

struct Assignment {
    labels: Vec<usize>,
    risk: f64,
}

fn assign(data: &Dataset, centers: &[Vec<f64>]) -> Assignment {
    let (labels, errors): (Vec<usize>, Vec<f64>) = data.iter().map(|x| nearest_center(centers, x)).unzip();
    let risk = errors.iter().sum::<f64>() / errors.len() as f64;
    Assignment { labels, risk }
}

fn lloyd(
    data: &Dataset,
    scheme: &SchemeSpec,
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Dictionary, Vec<f64>, bool)> {
    let k = scheme.k;
    let cap = scheme.c;
    let mut centers = match cfg.init {
        Init::RandomData => distinct_points(data, k, rng, |_| true)?,
        Init::RandomGaussianNormalized => (0..k).map(|_| gaussian_unit(data.dim(), rng)).collect(),
    };
    centers.iter_mut().for_each(|c| clip_norm(c, cap));

    let mut current = assign(data, &centers);
    let mut trace = vec![current.risk];
    let mut converged = false;
    for _ in 0..cfg.max_outer_iters {
        let next_centers = recenter(data, &current.labels, k, cap);
        let next = assign(data, &next_centers);
        if next.risk > current.risk {
            // Only reachable through rounding: every substep is a minimization.
            converged = true;
            break;
        }
        let stable = next.labels == current.labels;
        let rel = relative_decrease(current.risk, next.risk);
        centers = next_centers;
        current = next;
        trace.push(current.risk);
        if stable || rel < cfg.tol {
            converged = true;
            break;
        }
    }
    Ok((Dictionary::new(*scheme, centers)?, trace, converged))
}

/// Cluster means projected onto the radius-`cap` ball; empty clusters are
/// reseeded one at a time at the worst-coded point.
fn recenter(data: &Dataset, labels: &[usize], k: usize, cap: f64) -> Vec<Vec<f64>> {
    let dim = data.dim();
    let mut sums = vec![vec![0.0; dim]; k];
    let mut counts = vec![0usize; k];
    for (x, &l) in data.iter().zip(labels) {
        counts[l] += 1;
        sums[l].iter_mut().zip(x.iter()).for_each(|(s, v)| *s += v);
    }
    let mut centers: Vec<Option<Vec<f64>>> = sums
        .into_iter()
        .zip(&counts)
        .map(|(mut s, &n)| {
            (n > 0).then(|| {
                s.iter_mut().for_each(|v| *v /= n as f64);
                clip_norm(&mut s, cap);
                s
            })
        })
        .collect();

    while let Some(empty) = centers.iter().position(Option::is_none) {
        let filled: Vec<Vec<f64>> = centers.iter().flatten().cloned().collect();
        let worst = data
            .iter()
            .enumerate()
            .map(|(i, x)| (i, nearest_center(&filled, x).1))
            .fold(
                (0, f64::NEG_INFINITY),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            )
            .0;
        let mut seed = data.points()[worst].to_vec();
        clip_norm(&mut seed, cap);
        centers[empty] = Some(seed);
    }
    centers.into_iter().map(|c| c.expect("all filled")).collect()
}
