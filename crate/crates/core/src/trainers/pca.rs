use nalgebra::DMatrix;

use crate::data::Dataset;
use crate::dictionary::Dictionary;
use crate::linalg::sorted_eigen;
use crate::scheme::SchemeSpec;
use crate::{Error, Result};

/// Eigenpairs of the empirical second-moment operator `(1/m) Σ x_i x_iᵀ`,
/// sorted by decreasing eigenvalue.
pub fn second_moment_spectrum(data: &Dataset) -> Vec<(f64, Vec<f64>)> {
    let d = data.dim();
    let mut moment = DMatrix::zeros(d, d);
    for x in data.iter() {
        for i in 0..d {
            for j in i..d {
                moment[(i, j)] += x[i] * x[j];
            }
        }
    }
    for i in 0..d {
        for j in 0..i {
            moment[(i, j)] = moment[(j, i)];
        }
    }
    moment /= data.len() as f64;
    sorted_eigen(moment)
}

/// Exact PCA: the top-`k` eigenvectors of the second-moment operator span
/// the best `k`-dimensional projection. The empirical risk equals the sum of
/// the remaining eigenvalues.
pub fn train_pca(data: &Dataset, k: usize) -> Result<Dictionary> {
    if k > data.dim() {
        return Err(Error::KTooLarge { k, max: data.dim() });
    }
    let columns = second_moment_spectrum(data)
        .into_iter()
        .take(k)
        .map(|(_, v)| v)
        .collect();
    Dictionary::new(SchemeSpec::pca(k), columns)
}
