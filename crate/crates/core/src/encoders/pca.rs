use super::{EncodeResult, Encoder};
use crate::dictionary::{Code, Dictionary};
use crate::linalg::{adjoint, norm_sq};
use crate::Result;

impl Encoder<'_> {
    /// For an isometry the unconstrained minimizer `Tᵀx` already lies in the
    /// unit ball, and the residual is `‖x‖² − ‖Tᵀx‖²`.
    pub(crate) fn pca(&self, x: &[f64]) -> EncodeResult {
        let code = adjoint(self.columns, x);
        let error = (norm_sq(x) - norm_sq(&code)).max(0.0);
        EncodeResult {
            code: Code(code),
            error,
            iterations: 1,
            converged: true,
        }
    }
}

/// Orthogonal projection onto the span of an isometric dictionary.
pub fn encode_pca(dict: &Dictionary, x: &[f64]) -> Result<EncodeResult> {
    let enc = Encoder::new(dict);
    enc.check_point(x)?;
    Ok(enc.pca(x))
}
