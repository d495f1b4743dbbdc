//! Numerical tolerances used by invariant checks.
//!
//! Every check in the crate reads its slack from a [`Tolerances`] value so the
//! whole set can be overridden in one place.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Slack on `‖x‖ ≤ 1` for data points.
    pub unit_ball: f64,
    /// Slack on `TᵀT = I` for PCA dictionaries.
    pub orthonormal: f64,
    /// Slack on `‖Te_k‖ ≤ c` for capped columns (K-means, sparse).
    pub column_cap: f64,
    /// Slack on `‖Te_k‖ = 1` for NMF columns.
    pub unit_column: f64,
    /// Slack on `⟨Te_k, Te_l⟩ ≥ 0` for NMF columns.
    pub inner_product: f64,
    /// Slack on `‖y‖_2 ≤ 1` and `‖y‖_p ≤ 1` for codes.
    pub code_ball: f64,
    /// Slack on `y_k ≥ 0` for NMF codes.
    pub code_nonneg: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        unit_ball: 1e-12,
        orthonormal: 1e-10,
        column_cap: 1e-12,
        unit_column: 1e-10,
        inner_product: 1e-12,
        code_ball: 1e-9,
        code_nonneg: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
