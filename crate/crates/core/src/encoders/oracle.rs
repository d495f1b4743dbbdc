//! Brute-force encoder for tiny codebooks (`K ≤ 3`), used to certify the
//! real encoders. It shares no code path with them: it evaluates the
//! reconstruction error on a grid over the codebook, then refines the best
//! grid points by pattern search with step halving.

use super::EncodeResult;
use crate::dictionary::{Code, Dictionary};
use crate::linalg::{lp_norm, residual_sq};
use crate::scheme::SchemeKind;
use crate::{Error, Result};

pub const MAX_ORACLE_K: usize = 3;

/// Grid points per axis of the coarse search, by `K`.
const COARSE: [usize; 4] = [1, 2001, 201, 41];
const CANDIDATES: usize = 4;

/// Minimizes `‖x − Ty‖²` over the dictionary's codebook by exhaustive search.
///
/// Finite codebooks (K-means) are enumerated exactly. Continuous codebooks
/// are searched on a coarse grid and refined until the step falls below
/// `grid_resolution / 1000`. The search box is `[-1, 1]^K` for the `ℓ2`/`ℓp`
/// balls and `[0, 2]^K` for the NMF orthant: for unit columns with
/// nonnegative inner products `‖y‖ ≤ ‖Ty‖ ≤ 2‖x‖` at any minimizer.
pub fn oracle_encode(dict: &Dictionary, x: &[f64], grid_resolution: f64) -> Result<EncodeResult> {
    let k = dict.k();
    if k > MAX_ORACLE_K {
        return Err(Error::KTooLarge { k, max: MAX_ORACLE_K });
    }
    if x.len() != dict.dim() {
        return Err(Error::DimensionMismatch {
            expected: dict.dim(),
            found: x.len(),
        });
    }
    if !(grid_resolution > 0.0) {
        return Err(Error::InvalidParameter("grid resolution must be positive".into()));
    }
    let cols = dict.columns();
    let scheme = dict.scheme();

    if scheme.kind == SchemeKind::KMeans {
        let mut best: Option<(Vec<f64>, f64)> = None;
        for i in 0..k {
            let mut y = vec![0.0; k];
            y[i] = 1.0;
            let e = residual_sq(x, cols, &y);
            if best.as_ref().is_none_or(|(_, b)| e < *b) {
                best = Some((y, e));
            }
        }
        let (y, error) = best.expect("K ≥ 1");
        return Ok(EncodeResult {
            code: Code(y),
            error,
            iterations: k,
            converged: true,
        });
    }

    let (lo, hi) = if scheme.kind == SchemeKind::Nmf {
        (0.0, 2.0)
    } else {
        (-1.0, 1.0)
    };
    let p = match scheme.kind {
        SchemeKind::Pca => 2.0,
        SchemeKind::SparseLp => scheme.p(),
        _ => 2.0,
    };
    let nonneg = scheme.kind == SchemeKind::Nmf;
    // Maps any point of the box into the codebook.
    let into_codebook = |mut y: Vec<f64>| -> Vec<f64> {
        if nonneg {
            y.iter_mut().for_each(|v| *v = v.max(0.0));
        } else {
            let n = lp_norm(&y, p);
            if n > 1.0 {
                y.iter_mut().for_each(|v| *v /= n);
            }
        }
        y
    };
    let eval = |y: &[f64]| residual_sq(x, cols, y);

    let n = COARSE[k];
    let h = (hi - lo) / (n - 1) as f64;
    let mut evaluations = 0usize;
    let mut top: Vec<(f64, Vec<f64>)> = Vec::with_capacity(CANDIDATES + 1);
    let mut idx = vec![0usize; k];
    loop {
        let y = into_codebook(idx.iter().map(|&i| lo + h * i as f64).collect());
        let e = eval(&y);
        evaluations += 1;
        if top.len() < CANDIDATES || e < top[top.len() - 1].0 {
            let pos = top.partition_point(|(v, _)| *v <= e);
            top.insert(pos, (e, y));
            top.truncate(CANDIDATES);
        }
        // odometer increment
        let mut axis = 0;
        while axis < k {
            idx[axis] += 1;
            if idx[axis] < n {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
        if axis == k {
            break;
        }
    }

    let offsets = pattern_offsets(k);
    let floor = grid_resolution * 1e-3;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for (mut value, mut y) in top {
        let mut step = h;
        while step >= floor {
            let mut improved = false;
            for off in &offsets {
                let cand = into_codebook(y.iter().zip(off).map(|(v, o)| v + step * o).collect());
                let e = eval(&cand);
                evaluations += 1;
                if e < value {
                    value = e;
                    y = cand;
                    improved = true;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, y));
        }
    }
    let (error, y) = best.expect("at least one candidate");
    Ok(EncodeResult {
        code: Code(y),
        error,
        iterations: evaluations,
        converged: true,
    })
}

/// All nonzero vectors in `{-1, 0, 1}^K`.
fn pattern_offsets(k: usize) -> Vec<Vec<f64>> {
    let total = 3usize.pow(k as u32);
    (0..total)
        .map(|mut code| {
            (0..k)
                .map(|_| {
                    let d = code % 3;
                    code /= 3;
                    d as f64 - 1.0
                })
                .collect::<Vec<f64>>()
        })
        .filter(|v| v.iter().any(|&c| c != 0.0))
        .collect()
}
