//! Coding schemes: which codebook `Y` and operator class are in force.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeKind {
    /// `Y` = unit ball of `R^K`, `T` an isometry.
    Pca,
    /// `Y` = canonical basis, centers `Te_k` with `‖Te_k‖ ≤ c`.
    #[serde(rename = "kmeans")]
    KMeans,
    /// `Y` = positive orthant, unit columns with nonnegative pairwise inner products.
    Nmf,
    /// `Y` = `ℓp` unit ball, columns with `‖Te_k‖ ≤ 1`.
    #[serde(rename = "sparse")]
    SparseLp,
}

impl SchemeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeKind::Pca => "pca",
            SchemeKind::KMeans => "kmeans",
            SchemeKind::Nmf => "nmf",
            SchemeKind::SparseLp => "sparse",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pca" => Ok(SchemeKind::Pca),
            "kmeans" | "k-means" => Ok(SchemeKind::KMeans),
            "nmf" => Ok(SchemeKind::Nmf),
            "sparse" | "sparselp" | "lp" => Ok(SchemeKind::SparseLp),
            other => Err(Error::InvalidScheme(format!("unknown scheme {other:?}"))),
        }
    }
}

fn default_c() -> f64 {
    1.0
}

/// A coding scheme with its size parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeSpec {
    pub kind: SchemeKind,
    #[serde(rename = "K")]
    pub k: usize,
    /// Exponent of the `ℓp` codebook; only meaningful for [`SchemeKind::SparseLp`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Column-norm cap for K-means centers.
    #[serde(default = "default_c")]
    pub c: f64,
}

impl SchemeSpec {
    pub fn pca(k: usize) -> Self {
        Self {
            kind: SchemeKind::Pca,
            k,
            p: None,
            c: 1.0,
        }
    }

    pub fn kmeans(k: usize) -> Self {
        Self {
            kind: SchemeKind::KMeans,
            k,
            p: None,
            c: 1.0,
        }
    }

    pub fn kmeans_capped(k: usize, c: f64) -> Self {
        Self {
            kind: SchemeKind::KMeans,
            k,
            p: None,
            c,
        }
    }

    pub fn nmf(k: usize) -> Self {
        Self {
            kind: SchemeKind::Nmf,
            k,
            p: None,
            c: 1.0,
        }
    }

    pub fn sparse(k: usize, p: f64) -> Self {
        Self {
            kind: SchemeKind::SparseLp,
            k,
            p: Some(p),
            c: 1.0,
        }
    }

    /// The `ℓp` exponent (1 when unset).
    pub fn p(&self) -> f64 {
        self.p.unwrap_or(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::InvalidScheme("K must be at least 1".into()));
        }
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::InvalidScheme(format!("c must be positive, got {}", self.c)));
        }
        if self.kind == SchemeKind::SparseLp {
            let p = self.p();
            if !(p.is_finite() && p >= 1.0) {
                return Err(Error::InvalidScheme(format!("p must be finite and ≥ 1, got {p}")));
            }
        }
        Ok(())
    }

    /// Upper end `b` of the range of `f_T` on the unit ball.
    ///
    /// Codebooks that contain `y = 0` give `f_T(x) ≤ ‖x‖² ≤ 1`. K-means has no
    /// zero code, so the worst case is `(1 + c)²`, i.e. 4 for unit centers.
    pub fn range_bound(&self) -> f64 {
        match self.kind {
            SchemeKind::Pca | SchemeKind::Nmf | SchemeKind::SparseLp => 1.0,
            SchemeKind::KMeans => (1.0 + self.c).powi(2),
        }
    }
}

/// Worst-case `‖𝒯‖_Y = sup_{T ∈ 𝒯} sup_{y ∈ Y} ‖Ty‖` over the scheme's class.
pub fn class_norm(scheme: &SchemeSpec) -> f64 {
    let k = scheme.k as f64;
    match scheme.kind {
        SchemeKind::Pca => 1.0,
        SchemeKind::KMeans => scheme.c,
        SchemeKind::Nmf => k.sqrt(),
        SchemeKind::SparseLp => k.powf(1.0 - 1.0 / scheme.p()),
    }
}
