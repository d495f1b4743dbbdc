use super::projection::project_lp_ball;
use super::{EncodeResult, Encoder, MAX_ITERS};
use crate::dictionary::{Code, Dictionary};
use crate::linalg::{adjoint, residual_sq};
use crate::{Error, Result};

/// Stop once one step decreases the objective by less than this.
const DECREASE_TOL: f64 = 1e-12;

impl Encoder<'_> {
    /// `min_{‖y‖_p ≤ 1} ‖x − Ty‖²` by projected gradient with step `1/L`,
    /// warm-started at the projected least-squares solution.
    pub(crate) fn lp_ball(&self, x: &[f64], p: f64) -> EncodeResult {
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
        let mut y = project_lp_ball(&self.least_squares(&b), p);
        let mut value = self.half_objective(&y, &b);

        for it in 1..=MAX_ITERS {
            let grad: Vec<f64> = self.gram_apply(&y).iter().zip(&b).map(|(g, bi)| g - bi).collect();
            let trial: Vec<f64> = y.iter().zip(&grad).map(|(yi, gi)| yi - step * gi).collect();
            let next = project_lp_ball(&trial, p);
            let next_value = self.half_objective(&next, &b);
            if next_value > value {
                // Rounding only; a 1/L projected step cannot increase the objective.
                return finish(y, it, true);
            }
            let decrease = value - next_value;
            y = next;
            value = next_value;
            if decrease < DECREASE_TOL {
                return finish(y, it, true);
            }
        }
        finish(y, MAX_ITERS, false)
    }
}

/// Sparse coding over the `ℓp` unit ball.
pub fn encode_lp_ball(dict: &Dictionary, x: &[f64], p: f64) -> Result<EncodeResult> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidParameter(format!("p must be finite and ≥ 1, got {p}")));
    }
    let enc = Encoder::build(*dict.scheme(), dict.columns(), true);
    enc.check_point(x)?;
    Ok(enc.lp_ball(x, p))
}
