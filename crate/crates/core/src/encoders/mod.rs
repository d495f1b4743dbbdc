//! Per-point encoders: `ŷ = argmin_{y ∈ Y} ‖x − Ty‖²` and the reconstruction
//! error `f_T(x)`.
//!
//! [`Encoder`] caches the Gram matrix and step size of one dictionary so that
//! many points can be encoded cheaply; the free functions build one on the fly.

pub(crate) mod kmeans;
mod lp;
mod nnls;
pub mod oracle;
mod pca;
pub mod projection;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::dictionary::{Code, Dictionary};
use crate::linalg::{gram, max_eigenvalue};
use crate::scheme::{SchemeKind, SchemeSpec};
use crate::{Error, Result};

pub use kmeans::encode_kmeans;
pub use lp::encode_lp_ball;
pub use nnls::encode_nnls;
pub use oracle::oracle_encode;
pub use pca::encode_pca;

/// Iteration cap shared by the projected-gradient encoders.
pub const MAX_ITERS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodeResult {
    pub code: Code,
    /// Squared reconstruction error `‖x − T·code‖²`.
    pub error: f64,
    pub iterations: usize,
    /// False when an iterative solver hit its iteration cap.
    pub converged: bool,
}

/// Encoder bound to one set of columns.
#[derive(Debug, Clone)]
pub struct Encoder<'a> {
    scheme: SchemeSpec,
    columns: &'a [Vec<f64>],
    dim: usize,
    gram: DMatrix<f64>,
    /// Largest eigenvalue of the Gram matrix (`σ_max(T)²`).
    lipschitz: f64,
    /// `(TᵀT)⁺`, used for the least-squares warm start.
    gram_pinv: Option<DMatrix<f64>>,
}

impl<'a> Encoder<'a> {
    pub fn new(dict: &'a Dictionary) -> Self {
        Self::from_columns(*dict.scheme(), dict.columns())
    }

    /// Builds an encoder over raw columns without checking the operator-class
    /// constraints. Trainers use this for intermediate iterates.
    pub fn from_columns(scheme: SchemeSpec, columns: &'a [Vec<f64>]) -> Self {
        // Closed-form encoders never touch the Gram matrix.
        let needs_gram = matches!(scheme.kind, SchemeKind::Nmf | SchemeKind::SparseLp);
        Self::build(scheme, columns, needs_gram)
    }

    fn build(scheme: SchemeSpec, columns: &'a [Vec<f64>], needs_gram: bool) -> Self {
        let dim = columns.first().map_or(0, |c| c.len());
        let (gram, lipschitz, gram_pinv) = if needs_gram {
            let g = gram(columns);
            let l = max_eigenvalue(&g).max(0.0);
            let pinv = pseudo_inverse(&g);
            (g, l, Some(pinv))
        } else {
            (DMatrix::zeros(0, 0), 0.0, None)
        };
        Self {
            scheme,
            columns,
            dim,
            gram,
            lipschitz,
            gram_pinv,
        }
    }

    pub fn scheme(&self) -> &SchemeSpec {
        &self.scheme
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn encode(&self, x: &[f64]) -> Result<EncodeResult> {
        self.check_point(x)?;
        Ok(match self.scheme.kind {
            SchemeKind::KMeans => self.kmeans(x),
            SchemeKind::Pca => self.pca(x),
            SchemeKind::Nmf => self.nnls(x),
            SchemeKind::SparseLp => self.lp_ball(x, self.scheme.p()),
        })
    }

    /// Encodes every point of `data`, in index order.
    pub fn encode_all(&self, data: &Dataset) -> Result<Vec<EncodeResult>> {
        self.check_dim(data)?;
        Ok(data
            .points()
            .par_iter()
            .map(|x| self.encode(x).expect("dimension checked"))
            .collect())
    }

    /// Mean reconstruction error over `data`, summed in index order.
    pub fn risk(&self, data: &Dataset) -> Result<f64> {
        self.check_dim(data)?;
        let errors: Vec<f64> = data
            .points()
            .par_iter()
            .map(|x| self.encode(x).expect("dimension checked").error)
            .collect();
        Ok(errors.iter().sum::<f64>() / errors.len() as f64)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }

    fn check_dim(&self, data: &Dataset) -> Result<()> {
        if data.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if data.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: data.dim(),
            });
        }
        Ok(())
    }

    fn gram_apply(&self, y: &[f64]) -> Vec<f64> {
        let k = y.len();
        (0..k).map(|i| (0..k).map(|j| self.gram[(i, j)] * y[j]).sum()).collect()
    }

    /// `G⁺ b`: minimum-norm least-squares coefficients.
    fn least_squares(&self, b: &[f64]) -> Vec<f64> {
        match &self.gram_pinv {
            Some(p) => {
                let k = b.len();
                (0..k).map(|i| (0..k).map(|j| p[(i, j)] * b[j]).sum()).collect()
            }
            None => vec![0.0; b.len()],
        }
    }

    /// `½ yᵀGy − bᵀy`, the objective up to the constant `½‖x‖²`.
    fn half_objective(&self, y: &[f64], b: &[f64]) -> f64 {
        let gy = self.gram_apply(y);
        0.5 * crate::linalg::dot(y, &gy) - crate::linalg::dot(y, b)
    }
}

fn pseudo_inverse(g: &DMatrix<f64>) -> DMatrix<f64> {
    let n = g.nrows();
    let scale = g.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if n == 0 || scale == 0.0 {
        return DMatrix::zeros(n, n);
    }
    g.clone()
        .pseudo_inverse(scale * 1e-12 * n as f64)
        .unwrap_or_else(|_| DMatrix::zeros(n, n))
}

/// Encodes one point with the scheme-specific solver.
pub fn encode(dict: &Dictionary, x: &[f64]) -> Result<EncodeResult> {
    Encoder::new(dict).encode(x)
}

/// Empirical risk `(1/m) Σ f_T(x_i)`.
pub fn empirical_risk(dict: &Dictionary, data: &Dataset) -> Result<f64> {
    Encoder::new(dict).risk(data)
}
