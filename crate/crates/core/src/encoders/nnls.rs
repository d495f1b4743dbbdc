use super::{EncodeResult, Encoder, MAX_ITERS};
use crate::dictionary::{Code, Dictionary};
use crate::linalg::{adjoint, norm, residual_sq};
use crate::Result;

/// Stop once the projected gradient is this small.
const PG_TOL: f64 = 1e-10;
/// Attempt an exact solve on the current support every this many steps.
const POLISH_EVERY: usize = 16;

impl Encoder<'_> {
    /// `min_{y ≥ 0} ‖x − Ty‖²` by projected gradient with step `1/L`,
    /// `L = σ_max(T)²`, warm-started at the clamped least-squares solution.
    ///
    /// Every few steps the equality-constrained problem on the current support
    /// is solved directly; if that point satisfies the KKT conditions it is
    /// the exact minimizer and iteration stops.
    pub(crate) fn nnls(&self, x: &[f64]) -> EncodeResult {
        let k = self.columns.len();
        let b = adjoint(self.columns, x);
        let finish = |y: Vec<f64>, iterations: usize, converged: bool| {
            let error = residual_sq(x, self.columns, &y);
            EncodeResult {
                code: Code(y),
                error,
                iterations,
                converged,
            }
        };
        if self.lipschitz <= 0.0 {
            return finish(vec![0.0; k], 0, true);
        }
        let step = 1.0 / self.lipschitz;
        let mut y: Vec<f64> = self.least_squares(&b).into_iter().map(|v| v.max(0.0)).collect();

        for it in 0..MAX_ITERS {
            let grad = self.nnls_gradient(&y, &b);
            if projected_gradient_norm(&y, &grad) <= PG_TOL {
                return finish(y, it, true);
            }
            if it % POLISH_EVERY == 0 {
                if let Some(exact) = self.polish_support(&y, &b) {
                    return finish(exact, it, true);
                }
            }
            for (yi, gi) in y.iter_mut().zip(&grad) {
                *yi = (*yi - step * gi).max(0.0);
            }
        }
        let grad = self.nnls_gradient(&y, &b);
        let converged = projected_gradient_norm(&y, &grad) <= 1e-8;
        finish(y, MAX_ITERS, converged)
    }

    fn nnls_gradient(&self, y: &[f64], b: &[f64]) -> Vec<f64> {
        self.gram_apply(y).iter().zip(b).map(|(g, bi)| g - bi).collect()
    }

    fn polish_support(&self, y: &[f64], b: &[f64]) -> Option<Vec<f64>> {
        let support: Vec<usize> = (0..y.len()).filter(|&i| y[i] > 0.0).collect();
        if support.is_empty() {
            return None;
        }
        let n = support.len();
        let sub = nalgebra::DMatrix::from_fn(n, n, |i, j| self.gram[(support[i], support[j])]);
        let rhs: Vec<f64> = support.iter().map(|&i| b[i]).collect();
        let z = crate::linalg::pinv_solve(&sub, &rhs);
        if z.iter().any(|&v| !(v > 0.0)) {
            return None;
        }
        let mut candidate = vec![0.0; y.len()];
        for (&i, &v) in support.iter().zip(&z) {
            candidate[i] = v;
        }
        let grad = self.nnls_gradient(&candidate, b);
        (projected_gradient_norm(&candidate, &grad) <= PG_TOL).then_some(candidate)
    }
}

/// Norm of the projected gradient for the constraint `y ≥ 0`; zero exactly at
/// KKT points.
pub(crate) fn projected_gradient_norm(y: &[f64], grad: &[f64]) -> f64 {
    let pg: Vec<f64> = y
        .iter()
        .zip(grad)
        .map(|(&yi, &gi)| if yi > 0.0 { gi } else { gi.min(0.0) })
        .collect();
    norm(&pg)
}

/// Nonnegative least squares: the NMF encoder.
pub fn encode_nnls(dict: &Dictionary, x: &[f64]) -> Result<EncodeResult> {
    let enc = Encoder::build(*dict.scheme(), dict.columns(), true);
    enc.check_point(x)?;
    Ok(enc.nnls(x))
}
