//! Small dense helpers over `&[f64]` plus the few places where nalgebra does
//! the heavy lifting (symmetric eigenproblems, pseudo-inverses).

use nalgebra::{DMatrix, DVector, SymmetricEigen};

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

/// `‖a‖_p` for finite `p ≥ 1`.
pub fn lp_norm(a: &[f64], p: f64) -> f64 {
    if p == 1.0 {
        return a.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return norm(a);
    }
    let scale = a.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    scale * a.iter().map(|v| (v.abs() / scale).powf(p)).sum::<f64>().powf(1.0 / p)
}

pub fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `Σ_k y_k t_k` for columns `t_k`.
pub fn combine(columns: &[Vec<f64>], coeffs: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    for (col, &c) in columns.iter().zip(coeffs) {
        if c != 0.0 {
            for (o, v) in out.iter_mut().zip(col) {
                *o += c * v;
            }
        }
    }
    out
}

/// `‖x − Σ_k y_k t_k‖²`, evaluated from the explicit residual.
pub fn residual_sq(x: &[f64], columns: &[Vec<f64>], coeffs: &[f64]) -> f64 {
    let recon = combine(columns, coeffs, x.len());
    sq_dist(x, &recon)
}

/// `Tᵀx`.
pub fn adjoint(columns: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    columns.iter().map(|c| dot(c, x)).collect()
}

/// Gram matrix `TᵀT` of a list of columns.
pub fn gram(columns: &[Vec<f64>]) -> DMatrix<f64> {
    let k = columns.len();
    let mut g = DMatrix::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let v = dot(&columns[i], &columns[j]);
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    g
}

/// Largest eigenvalue of a symmetric matrix; 0 for an empty matrix.
pub fn max_eigenvalue(sym: &DMatrix<f64>) -> f64 {
    if sym.nrows() == 0 {
        return 0.0;
    }
    SymmetricEigen::new(sym.clone())
        .eigenvalues
        .iter()
        .fold(f64::NEG_INFINITY, |m, &v| m.max(v))
}

/// Eigenpairs of a symmetric matrix sorted by decreasing eigenvalue.
///
/// Each eigenvector's sign is fixed so that its largest-magnitude entry is
/// positive (first such entry on ties), which makes results reproducible.
pub fn sorted_eigen(sym: DMatrix<f64>) -> Vec<(f64, Vec<f64>)> {
    let eig = SymmetricEigen::new(sym);
    let mut pairs: Vec<(f64, Vec<f64>)> = eig
        .eigenvalues
        .iter()
        .zip(eig.eigenvectors.column_iter())
        .map(|(&val, vec)| {
            let mut v: Vec<f64> = vec.iter().copied().collect();
            let pivot = v
                .iter()
                .enumerate()
                .fold(
                    (0, 0.0f64),
                    |(bi, bv), (i, &x)| {
                        if x.abs() > bv {
                            (i, x.abs())
                        } else {
                            (bi, bv)
                        }
                    },
                )
                .0;
            if v[pivot] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            (val, v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
}

/// Moore–Penrose pseudo-inverse solve `G⁺ b` for a symmetric PSD `G`.
pub fn pinv_solve(g: &DMatrix<f64>, b: &[f64]) -> Vec<f64> {
    let n = g.nrows();
    if n == 0 {
        return Vec::new();
    }
    let scale = g.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return vec![0.0; n];
    }
    let eps = scale * 1e-12 * n as f64;
    let pinv = match g.clone().pseudo_inverse(eps) {
        Ok(p) => p,
        Err(_) => return vec![0.0; n],
    };
    let rhs = DVector::from_column_slice(b);
    (pinv * rhs).iter().copied().collect()
}

/// Orthonormalize columns by modified Gram–Schmidt. Returns `None` when the
/// columns are numerically dependent.
pub fn gram_schmidt(columns: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut v = col.clone();
        // Two passes keep the result orthonormal to ~1e-15.
        for _ in 0..2 {
            for q in &out {
                let proj = dot(&v, q);
                v.iter_mut().zip(q).for_each(|(a, b)| *a -= proj * b);
            }
        }
        let n = norm(&v);
        if n < 1e-10 {
            return None;
        }
        v.iter_mut().for_each(|a| *a /= n);
        out.push(v);
    }
    Some(out)
}
