//! Closed-form uniform deviation bounds.
//!
//! Each function evaluates a bound on `sup_T |E f_T − (1/m) Σ f_T(x_i)|`
//! holding with probability at least `1 − δ`. All logarithms are natural.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Which scheme a request describes; decides which specialised bounds apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundScheme {
    Pca,
    #[serde(rename = "kmeans")]
    KMeans,
    Nmf,
    Sparse,
    Custom,
}

impl FromStr for BoundScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pca" => Ok(Self::Pca),
            "kmeans" | "k-means" => Ok(Self::KMeans),
            "nmf" => Ok(Self::Nmf),
            "sparse" => Ok(Self::Sparse),
            "custom" => Ok(Self::Custom),
            other => Err(Error::InvalidScheme(format!("unknown bound scheme {other:?}"))),
        }
    }
}

impl From<crate::SchemeKind> for BoundScheme {
    fn from(kind: crate::SchemeKind) -> Self {
        match kind {
            crate::SchemeKind::Pca => Self::Pca,
            crate::SchemeKind::KMeans => Self::KMeans,
            crate::SchemeKind::Nmf => Self::Nmf,
            crate::SchemeKind::SparseLp => Self::Sparse,
        }
    }
}

/// Names of the individual bounds, in declaration (tie-break) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundName {
    Thm1,
    Thm2,
    Thm4Kmeans,
    Nmf,
    Sparse,
    Pca,
    FiniteDim,
}

impl BoundName {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundName::Thm1 => "thm1",
            BoundName::Thm2 => "thm2",
            BoundName::Thm4Kmeans => "thm4_kmeans",
            BoundName::Nmf => "nmf",
            BoundName::Sparse => "sparse",
            BoundName::Pca => "pca",
            BoundName::FiniteDim => "finite_dim",
        }
    }
}

impl fmt::Display for BoundName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters of a bound evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundRequest {
    #[serde(rename = "K")]
    pub k: usize,
    pub m: usize,
    pub delta: f64,
    /// Operator-norm cap for the first bound; must be at least 1.
    pub c: f64,
    /// Upper end of the range of `f_T`.
    pub b: f64,
    /// `‖𝒯‖_Y`; must be at least 1.
    pub class_norm: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
}

impl BoundRequest {
    /// A request with `c = b = ‖𝒯‖_Y = 1` and no `p` or `d`.
    pub fn new(k: usize, m: usize, delta: f64) -> Self {
        Self {
            k,
            m,
            delta,
            c: 1.0,
            b: 1.0,
            class_norm: 1.0,
            p: None,
            d: None,
        }
    }

    /// A request with the class norm and range bound of a standard scheme.
    /// `p` is required for [`BoundScheme::Sparse`].
    pub fn for_scheme(scheme: BoundScheme, k: usize, m: usize, delta: f64, p: Option<f64>) -> Result<Self> {
        let mut req = Self::new(k, m, delta);
        let kf = k as f64;
        match scheme {
            BoundScheme::Pca | BoundScheme::Custom => {}
            BoundScheme::KMeans => req.b = 4.0,
            BoundScheme::Nmf => req.class_norm = kf.sqrt(),
            BoundScheme::Sparse => {
                let p = p.ok_or_else(|| Error::InvalidParameter("sparse bound needs p".into()))?;
                req.p = Some(p);
                req.class_norm = kf.powf(1.0 - 1.0 / p);
            }
        }
        req.validate()?;
        Ok(req)
    }

    /// Sets the operator-norm cap. For K-means the centers then have norm at
    /// most `c`, so the class norm becomes `c` and the range `(1 + c)²`.
    pub fn set_c(&mut self, scheme: BoundScheme, c: f64) {
        self.c = c;
        if scheme == BoundScheme::KMeans {
            self.class_norm = c;
            self.b = (1.0 + c) * (1.0 + c);
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.k < 1 {
            return bad("K must be at least 1".into());
        }
        if self.m < 1 {
            return bad("m must be at least 1".into());
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !(self.c >= 1.0 && self.c.is_finite()) {
            return bad(format!("c must be ≥ 1, got {}", self.c));
        }
        if !(self.b >= 0.0 && self.b.is_finite()) {
            return bad(format!("b must be nonnegative, got {}", self.b));
        }
        if !(self.class_norm >= 1.0 && self.class_norm.is_finite()) {
            return bad(format!("class norm must be ≥ 1, got {}", self.class_norm));
        }
        if let Some(p) = self.p {
            if !(p >= 1.0 && p.is_finite()) {
                return bad(format!("p must be ≥ 1, got {p}"));
            }
        }
        if self.d == Some(0) {
            return bad("d must be at least 1".into());
        }
        Ok(())
    }

    fn m(&self) -> f64 {
        self.m as f64
    }

    fn k(&self) -> f64 {
        self.k as f64
    }

    fn log_inv_delta(&self) -> f64 {
        (1.0 / self.delta).ln()
    }

    /// Confidence term `b √(ln(1/δ) / 2m)` shared by the second family.
    fn confidence(&self, b: f64) -> f64 {
        b * (self.log_inv_delta() / (2.0 * self.m())).sqrt()
    }
}

/// `6c²K²√(π/m) + c²√(8 ln(1/δ)/m)`, for codebooks inside the unit ball and
/// operators with `‖T‖ ≤ c`.
pub fn theorem1_bound(req: &BoundRequest) -> f64 {
    let c2 = req.c * req.c;
    let k = req.k();
    6.0 * c2 * k * k * (PI / req.m()).sqrt() + c2 * (8.0 * req.log_inv_delta() / req.m()).sqrt()
}

/// `(K/√m)(14‖𝒯‖_Y + (b/2)√ln(16m‖𝒯‖_Y²)) + b√(ln(1/δ)/2m)`.
pub fn theorem2_bound(req: &BoundRequest) -> Result<f64> {
    let n = req.class_norm;
    if !(n >= 1.0) {
        return Err(Error::BoundPrecondition(format!("‖𝒯‖_Y = {n} < 1")));
    }
    let inner = 16.0 * req.m() * n * n;
    if !(inner > 1.0) {
        return Err(Error::BoundPrecondition(format!("16 m ‖𝒯‖_Y² = {inner} ≤ 1")));
    }
    Ok(second_family(req, n, req.b, inner))
}

fn second_family(req: &BoundRequest, class_norm: f64, b: f64, log_arg: f64) -> f64 {
    req.k() / req.m().sqrt() * (14.0 * class_norm + 0.5 * b * log_arg.ln().sqrt()) + req.confidence(b)
}

/// K-means bound `K√(18π/m) + √(8 ln(1/δ)/m)` for centers in the unit ball.
pub fn kmeans_bound(req: &BoundRequest) -> f64 {
    req.k() * (18.0 * PI / req.m()).sqrt() + (8.0 * req.log_inv_delta() / req.m()).sqrt()
}

/// NMF bound `(K/√m)(14√K + ½√ln(16mK)) + √(ln(1/δ)/2m)`.
pub fn nmf_bound(req: &BoundRequest) -> f64 {
    let k = req.k();
    second_family(req, k.sqrt(), 1.0, 16.0 * req.m() * k)
}

/// `ℓp` sparse coding bound
/// `(K/√m)(14K^{1−1/p} + ½√ln(16mK^{2−2/p})) + √(ln(1/δ)/2m)`.
pub fn sparse_bound(req: &BoundRequest) -> Result<f64> {
    let p = req
        .p
        .ok_or_else(|| Error::BoundPrecondition("sparse bound needs p".into()))?;
    if !(p >= 1.0) {
        return Err(Error::BoundPrecondition(format!("p = {p} < 1")));
    }
    let k = req.k();
    let class_norm = k.powf(1.0 - 1.0 / p);
    Ok(second_family(
        req,
        class_norm,
        1.0,
        16.0 * req.m() * k.powf(2.0 - 2.0 / p),
    ))
}

/// Finite-dimensional refinement
/// `(b/2)√(dK ln(16m‖𝒯‖_Y²)/m) + 8‖𝒯‖_Y/√m + b√(ln(1/δ)/2m)`.
pub fn finite_dim_bound(req: &BoundRequest) -> Result<f64> {
    let d = req
        .d
        .ok_or_else(|| Error::BoundPrecondition("finite-dimensional bound needs d".into()))? as f64;
    let n = req.class_norm;
    let m = req.m();
    let log_term = (16.0 * m * n * n).ln();
    Ok(0.5 * req.b * (d * req.k() * log_term / m).sqrt() + 8.0 * n / m.sqrt() + req.confidence(req.b))
}

/// Rademacher complexity bound `2√(K/m)` for the PCA loss class.
pub fn pca_rademacher(k: usize, m: usize) -> f64 {
    2.0 * (k as f64 / m as f64).sqrt()
}

/// PCA deviation bound `2√(K/m) + √(ln(1/δ)/2m)` (single class, `b = 1`).
pub fn pca_bound(req: &BoundRequest) -> f64 {
    pca_rademacher(req.k, req.m) + req.confidence(1.0)
}

/// Every applicable bound for one request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub scheme: BoundScheme,
    pub request: BoundRequest,
    pub thm1: f64,
    pub thm2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thm4_kmeans: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nmf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparse: Option<f64>,
    /// Rademacher complexity term for PCA; not itself a deviation bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pca_rad: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pca: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub finite_dim: Option<f64>,
    pub tightest: BoundName,
}

impl BoundReport {
    /// Deviation bounds whose hypotheses hold, in declaration order.
    pub fn applicable(&self) -> Vec<(BoundName, f64)> {
        let mut out = Vec::new();
        // ℓp balls with p > 2 stick out of the Euclidean unit ball.
        let thm1_ok = !(self.scheme == BoundScheme::Sparse && self.request.p.is_some_and(|p| p > 2.0));
        if thm1_ok {
            out.push((BoundName::Thm1, self.thm1));
        }
        out.push((BoundName::Thm2, self.thm2));
        let optional = [
            (BoundName::Thm4Kmeans, self.thm4_kmeans),
            (BoundName::Nmf, self.nmf),
            (BoundName::Sparse, self.sparse),
            (BoundName::Pca, self.pca),
            (BoundName::FiniteDim, self.finite_dim),
        ];
        out.extend(optional.into_iter().filter_map(|(n, v)| v.map(|v| (n, v))));
        out
    }

    pub fn get(&self, name: BoundName) -> Option<f64> {
        match name {
            BoundName::Thm1 => Some(self.thm1),
            BoundName::Thm2 => Some(self.thm2),
            BoundName::Thm4Kmeans => self.thm4_kmeans,
            BoundName::Nmf => self.nmf,
            BoundName::Sparse => self.sparse,
            BoundName::Pca => self.pca,
            BoundName::FiniteDim => self.finite_dim,
        }
    }
}

/// Evaluates every bound that applies to `scheme` and picks the tightest.
pub fn bound_report(req: &BoundRequest, scheme: BoundScheme) -> Result<BoundReport> {
    req.validate()?;
    let thm1 = theorem1_bound(req);
    let thm2 = theorem2_bound(req)?;
    let thm4_kmeans = (scheme == BoundScheme::KMeans && req.c <= 1.0).then(|| kmeans_bound(req));
    let nmf = (scheme == BoundScheme::Nmf).then(|| nmf_bound(req));
    let sparse = if scheme == BoundScheme::Sparse {
        Some(sparse_bound(req)?)
    } else {
        None
    };
    let (pca_rad, pca) = if scheme == BoundScheme::Pca {
        (Some(pca_rademacher(req.k, req.m)), Some(pca_bound(req)))
    } else {
        (None, None)
    };
    let finite_dim = if req.d.is_some() {
        Some(finite_dim_bound(req)?)
    } else {
        None
    };
    let mut report = BoundReport {
        scheme,
        request: *req,
        thm1,
        thm2,
        thm4_kmeans,
        nmf,
        sparse,
        pca_rad,
        pca,
        finite_dim,
        tightest: BoundName::Thm2,
    };
    let mut best: Option<(BoundName, f64)> = None;
    for (name, value) in report.applicable() {
        if best.is_none_or(|(_, v)| value < v) {
            best = Some((name, value));
        }
    }
    report.tightest = best.expect("thm2 always applies").0;
    Ok(report)
}
