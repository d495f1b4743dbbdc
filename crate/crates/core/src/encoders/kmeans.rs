use super::{EncodeResult, Encoder};
use crate::dictionary::{Code, Dictionary};
use crate::linalg::sq_dist;
use crate::Result;

impl Encoder<'_> {
    /// Nearest center; ties go to the smallest index.
    pub(crate) fn kmeans(&self, x: &[f64]) -> EncodeResult {
        let (best, error) = nearest_center(self.columns, x);
        let mut code = vec![0.0; self.columns.len()];
        code[best] = 1.0;
        EncodeResult {
            code: Code(code),
            error,
            iterations: 1,
            converged: true,
        }
    }
}

/// Index and squared distance of the nearest column, lowest index on ties.
pub(crate) fn nearest_center(columns: &[Vec<f64>], x: &[f64]) -> (usize, f64) {
    let mut best = 0;
    let mut best_dist = f64::INFINITY;
    for (k, c) in columns.iter().enumerate() {
        let dist = sq_dist(x, c);
        if dist < best_dist {
            best = k;
            best_dist = dist;
        }
    }
    (best, best_dist)
}

/// K-means coding: `x` is coded by `e_k` with `Te_k` nearest to `x`.
pub fn encode_kmeans(dict: &Dictionary, x: &[f64]) -> Result<EncodeResult> {
    let enc = Encoder::new(dict);
    enc.check_point(x)?;
    Ok(enc.kmeans(x))
}
