//! Empirical risk minimization over each scheme's operator class:
//! `T̂ = argmin_{T ∈ 𝒯} (1/m) Σ_i f_T(x_i)`.
//!
//! PCA is solved exactly by an eigendecomposition. The other schemes are
//! non-convex and use alternating minimization from random starts; the best
//! of `restarts` runs wins.

mod kmeans;
mod nmf;
mod pca;
mod sparse;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::dictionary::Dictionary;
use crate::linalg::norm;
use crate::scheme::{SchemeKind, SchemeSpec};
use crate::{Error, Result};

pub use kmeans::train_kmeans;
pub use nmf::train_nmf;
pub use pca::{second_moment_spectrum, train_pca};
pub use sparse::train_sparse;

/// How atoms are initialised before alternating minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init {
    /// `K` distinct data points.
    RandomData,
    /// `K` standard Gaussian vectors scaled to unit norm.
    RandomGaussianNormalized,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub max_outer_iters: usize,
    /// Stop once the relative risk decrease of one outer iteration drops below this.
    pub tol: f64,
    pub seed: u64,
    pub init: Init,
    pub restarts: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            max_outer_iters: 500,
            tol: 1e-9,
            seed: 0,
            init: Init::RandomData,
            restarts: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_outer_iters < 1 {
            return Err(Error::InvalidParameter("max_outer_iters must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidParameter("restarts must be at least 1".into()));
        }
        Ok(())
    }

    /// RNG for one restart: the restart index selects an independent ChaCha
    /// stream, so restarts can run in any order.
    pub fn restart_rng(&self, restart: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(restart as u64);
        rng
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub dict: Dictionary,
    /// Empirical risk of the dictionary after each accepted outer iteration,
    /// starting with the initial dictionary.
    pub risk_trace: Vec<f64>,
    pub converged: bool,
    /// Index of the restart that produced `dict`.
    pub restart: usize,
}

impl TrainReport {
    pub fn final_risk(&self) -> f64 {
        *self.risk_trace.last().expect("trace is never empty")
    }
}

/// Trains a dictionary for `scheme` on `data`.
pub fn train(scheme: &SchemeSpec, data: &Dataset, cfg: &TrainConfig) -> Result<TrainReport> {
    scheme.validate()?;
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    match scheme.kind {
        SchemeKind::Pca => {
            let dict = train_pca(data, scheme.k)?;
            let risk = crate::encoders::empirical_risk(&dict, data)?;
            Ok(TrainReport {
                dict,
                risk_trace: vec![risk],
                converged: true,
                restart: 0,
            })
        }
        SchemeKind::KMeans => train_kmeans(data, scheme.k, scheme.c, cfg),
        SchemeKind::Nmf => train_nmf(data, scheme.k, cfg),
        SchemeKind::SparseLp => train_sparse(data, scheme.k, scheme.p(), cfg),
    }
}

/// Runs `run` once per restart (in parallel) and keeps the lowest final risk,
/// ties going to the lowest restart index.
pub(crate) fn best_of_restarts<F>(cfg: &TrainConfig, run: F) -> Result<TrainReport>
where
    F: Fn(&mut ChaCha8Rng) -> Result<(Dictionary, Vec<f64>, bool)> + Sync,
{
    let reports: Vec<TrainReport> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = cfg.restart_rng(r);
            run(&mut rng).map(|(dict, risk_trace, converged)| TrainReport {
                dict,
                risk_trace,
                converged,
                restart: r,
            })
        })
        .collect::<Result<_>>()?;
    let mut best: Option<TrainReport> = None;
    for rep in reports {
        if best.as_ref().is_none_or(|b| rep.final_risk() < b.final_risk()) {
            best = Some(rep);
        }
    }
    Ok(best.expect("restarts ≥ 1"))
}

/// `k` distinct points drawn from those accepted by `usable`.
pub(crate) fn distinct_points<F>(data: &Dataset, k: usize, rng: &mut ChaCha8Rng, usable: F) -> Result<Vec<Vec<f64>>>
where
    F: Fn(&[f64]) -> bool,
{
    let mut unique: Vec<&[f64]> = Vec::new();
    for p in data.iter() {
        let p: &[f64] = p;
        if usable(p) && !unique.contains(&p) {
            unique.push(p);
        }
    }
    if unique.len() < k {
        return Err(Error::DegenerateInit {
            k,
            available: unique.len(),
        });
    }
    Ok(index::sample(rng, unique.len(), k)
        .into_iter()
        .map(|i| unique[i].to_vec())
        .collect())
}

/// A standard Gaussian vector scaled to unit norm.
pub(crate) fn gaussian_unit(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        let n = norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Scales `v` onto the ball of radius `cap` if it lies outside.
pub(crate) fn clip_norm(v: &mut [f64], cap: f64) {
    let n = norm(v);
    if n > cap {
        let s = cap / n;
        v.iter_mut().for_each(|x| *x *= s);
    }
}

/// `(1/m) Σ_i ‖x_i − T y_i‖²` for fixed codes, summed in index order.
pub(crate) fn fixed_code_risk(data: &Dataset, columns: &[Vec<f64>], codes: &[Vec<f64>]) -> f64 {
    let total: f64 = data
        .iter()
        .zip(codes)
        .map(|(x, y)| crate::linalg::residual_sq(x, columns, y))
        .sum();
    total / data.len() as f64
}

/// Sufficient statistics of the dictionary subproblem:
/// `A = (1/m) Σ y yᵀ` (K×K) and `B = (1/m) Σ x yᵀ` (stored as K columns in R^d).
pub(crate) fn code_moments(data: &Dataset, codes: &[Vec<f64>], k: usize) -> (nalgebra::DMatrix<f64>, Vec<Vec<f64>>) {
    let m = data.len() as f64;
    let mut a = nalgebra::DMatrix::zeros(k, k);
    let mut b = vec![vec![0.0; data.dim()]; k];
    for (x, y) in data.iter().zip(codes) {
        for i in 0..k {
            if y[i] == 0.0 {
                continue;
            }
            for j in 0..k {
                a[(i, j)] += y[i] * y[j];
            }
            for (bv, xv) in b[i].iter_mut().zip(x.iter()) {
                *bv += y[i] * xv;
            }
        }
    }
    a /= m;
    b.iter_mut().flatten().for_each(|v| *v /= m);
    (a, b)
}

/// Gradient `2(TA − B)` of the fixed-code risk with respect to the columns.
pub(crate) fn dictionary_gradient(columns: &[Vec<f64>], a: &nalgebra::DMatrix<f64>, b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = columns.len();
    let dim = columns[0].len();
    (0..k)
        .map(|j| {
            let mut g = vec![0.0; dim];
            for (i, col) in columns.iter().enumerate() {
                let aij = a[(i, j)];
                if aij != 0.0 {
                    g.iter_mut().zip(col).for_each(|(gv, cv)| *gv += aij * cv);
                }
            }
            g.iter_mut().zip(&b[j]).for_each(|(gv, bv)| *gv = 2.0 * (*gv - bv));
            g
        })
        .collect()
}

/// Relative decrease `(old − new) / old`, zero when `old` is zero.
pub(crate) fn relative_decrease(old: f64, new: f64) -> f64 {
    if old > 0.0 {
        (old - new) / old
    } else {
        0.0
    }
}
