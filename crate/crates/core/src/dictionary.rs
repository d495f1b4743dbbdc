//! Dictionaries (the linear map `T` stored as `K` columns) and codes.

use std::fs;
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linalg::{dot, gram, lp_norm, max_eigenvalue, norm};
use crate::scheme::{SchemeKind, SchemeSpec};
use crate::tolerance::Tolerances;
use crate::{Error, Result};

/// A coefficient vector `y ∈ R^K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Code(pub Vec<f64>);

impl Code {
    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }

    /// Whether the code lies in the scheme's codebook up to `tol`.
    pub fn in_codebook(&self, scheme: &SchemeSpec, tol: &Tolerances) -> bool {
        let y = &self.0;
        if y.len() != scheme.k {
            return false;
        }
        match scheme.kind {
            SchemeKind::Pca => norm(y) <= 1.0 + tol.code_ball,
            SchemeKind::KMeans => {
                y.iter().filter(|&&v| v == 1.0).count() == 1 && y.iter().all(|&v| v == 0.0 || v == 1.0)
            }
            SchemeKind::Nmf => y.iter().all(|&v| v >= -tol.code_nonneg),
            SchemeKind::SparseLp => lp_norm(y, scheme.p()) <= 1.0 + tol.code_ball,
        }
    }
}

impl Deref for Code {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// The map `T: R^K -> R^d`, stored as the images `Te_1, …, Te_K`.
///
/// Construction checks the scheme's operator-class constraints.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "DictionaryFile", try_from = "DictionaryFile")]
pub struct Dictionary {
    scheme: SchemeSpec,
    dim: usize,
    columns: Vec<Vec<f64>>,
}

impl Dictionary {
    pub fn new(scheme: SchemeSpec, columns: Vec<Vec<f64>>) -> Result<Self> {
        Self::new_with(scheme, columns, &Tolerances::DEFAULT)
    }

    pub fn new_with(scheme: SchemeSpec, columns: Vec<Vec<f64>>, tol: &Tolerances) -> Result<Self> {
        scheme.validate()?;
        if columns.len() != scheme.k {
            return Err(Error::InvalidDictionary(format!(
                "expected K = {} columns, found {}",
                scheme.k,
                columns.len()
            )));
        }
        let dim = columns[0].len();
        if dim == 0 {
            return Err(Error::InvalidDictionary("columns have dimension 0".into()));
        }
        if let Some(bad) = columns.iter().find(|c| c.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.len(),
            });
        }
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidDictionary("non-finite entry".into()));
        }
        let dict = Self { scheme, dim, columns };
        dict.check_invariants(tol)?;
        Ok(dict)
    }

    fn check_invariants(&self, tol: &Tolerances) -> Result<()> {
        let cols = &self.columns;
        let fail = |msg: String| Err(Error::InvalidDictionary(msg));
        match self.scheme.kind {
            SchemeKind::Pca => {
                if self.scheme.k > self.dim {
                    return fail(format!("PCA needs K ≤ d, got K = {} > d = {}", self.scheme.k, self.dim));
                }
                for i in 0..cols.len() {
                    for j in i..cols.len() {
                        let target = if i == j { 1.0 } else { 0.0 };
                        let g = dot(&cols[i], &cols[j]);
                        if (g - target).abs() > tol.orthonormal {
                            return fail(format!("columns {i},{j} not orthonormal: ⟨·,·⟩ = {g}"));
                        }
                    }
                }
            }
            SchemeKind::KMeans | SchemeKind::SparseLp => {
                let cap = if self.scheme.kind == SchemeKind::KMeans {
                    self.scheme.c
                } else {
                    1.0
                };
                for (k, c) in cols.iter().enumerate() {
                    let n = norm(c);
                    if n > cap + tol.column_cap {
                        return fail(format!("column {k} has norm {n} > {cap}"));
                    }
                }
            }
            SchemeKind::Nmf => {
                for (k, c) in cols.iter().enumerate() {
                    let n = norm(c);
                    if (n - 1.0).abs() > tol.unit_column {
                        return fail(format!("column {k} has norm {n}, expected 1"));
                    }
                }
                for i in 0..cols.len() {
                    for j in i + 1..cols.len() {
                        let g = dot(&cols[i], &cols[j]);
                        if g < -tol.inner_product {
                            return fail(format!("columns {i},{j} have negative inner product {g}"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn scheme(&self) -> &SchemeSpec {
        &self.scheme
    }

    pub fn k(&self) -> usize {
        self.scheme.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    /// `T y`.
    pub fn apply(&self, y: &[f64]) -> Vec<f64> {
        crate::linalg::combine(&self.columns, y, self.dim)
    }

    pub fn save_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn load_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// On-disk layout: `{scheme, K, d, p?, c?, columns}` with one array per column.
#[derive(Serialize, Deserialize)]
struct DictionaryFile {
    scheme: SchemeKind,
    #[serde(rename = "K")]
    k: usize,
    d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<f64>,
    columns: Vec<Vec<f64>>,
}

impl From<Dictionary> for DictionaryFile {
    fn from(d: Dictionary) -> Self {
        let s = d.scheme;
        DictionaryFile {
            scheme: s.kind,
            k: s.k,
            d: d.dim,
            p: if s.kind == SchemeKind::SparseLp {
                Some(s.p())
            } else {
                None
            },
            c: if s.kind == SchemeKind::KMeans { Some(s.c) } else { None },
            columns: d.columns,
        }
    }
}

impl TryFrom<DictionaryFile> for Dictionary {
    type Error = Error;

    fn try_from(f: DictionaryFile) -> Result<Self> {
        let scheme = SchemeSpec {
            kind: f.scheme,
            k: f.k,
            p: if f.scheme == SchemeKind::SparseLp {
                Some(f.p.unwrap_or(1.0))
            } else {
                None
            },
            c: f.c.unwrap_or(1.0),
        };
        let dict = Dictionary::new(scheme, f.columns)?;
        if dict.dim != f.d {
            return Err(Error::DimensionMismatch {
                expected: f.d,
                found: dict.dim,
            });
        }
        Ok(dict)
    }
}

/// `‖T‖_Y = sup_{y ∈ Y} ‖Ty‖` for one dictionary.
///
/// The NMF codebook is intersected with the unit ball, since NNLS minimizers
/// for data in the unit ball never leave it.
pub fn codebook_norm(dict: &Dictionary) -> f64 {
    let cols = dict.columns();
    let max_col = || cols.iter().map(|c| norm(c)).fold(0.0f64, f64::max);
    match dict.scheme().kind {
        SchemeKind::Pca => max_eigenvalue(&gram(cols)).max(0.0).sqrt(),
        SchemeKind::KMeans => max_col(),
        SchemeKind::Nmf => nonneg_power_iteration(cols),
        SchemeKind::SparseLp => {
            let p = dict.scheme().p();
            if p == 1.0 {
                max_col()
            } else {
                lp_to_l2_norm(cols, p)
            }
        }
    }
}

const NORM_ITERS: usize = 10_000;
const NORM_STOP: f64 = 1e-15;

/// `sup { ‖Ty‖ : y ≥ 0, ‖y‖ ≤ 1 }` by projected power iteration on the Gram
/// matrix.
fn nonneg_power_iteration(cols: &[Vec<f64>]) -> f64 {
    let g = gram(cols);
    let k = cols.len();
    let quad = |y: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..k {
            for j in 0..k {
                s += y[i] * g[(i, j)] * y[j];
            }
        }
        s
    };
    let mut best = cols.iter().map(|c| norm(c)).fold(0.0f64, f64::max).powi(2);
    let mut y = vec![1.0 / (k as f64).sqrt(); k];
    for _ in 0..NORM_ITERS {
        let mut z: Vec<f64> = (0..k)
            .map(|i| (0..k).map(|j| g[(i, j)] * y[j]).sum::<f64>().max(0.0))
            .collect();
        let n = norm(&z);
        if n == 0.0 {
            break;
        }
        z.iter_mut().for_each(|v| *v /= n);
        let step = crate::linalg::sq_dist(&z, &y);
        y = z;
        if step < NORM_STOP {
            break;
        }
    }
    best = best.max(quad(&y));
    best.max(0.0).sqrt()
}

/// `sup { ‖Ty‖ : ‖y‖_p ≤ 1 }` for `p > 1` by projected gradient ascent on the
/// `ℓp` sphere. Each step maximizes the linearization `⟨TᵀTy, y'⟩` over the
/// sphere, which is monotone for the convex objective. Several starts are
/// used and the result is capped by `(Σ_k ‖Te_k‖^q)^{1/q} ≤ K^{1−1/p}`.
fn lp_to_l2_norm(cols: &[Vec<f64>], p: f64) -> f64 {
    let k = cols.len();
    let q = p / (p - 1.0);
    let g = gram(cols);
    let objective = |y: &[f64]| -> f64 {
        let ty = crate::linalg::combine(cols, y, cols[0].len());
        norm(&ty)
    };
    let to_sphere = |z: &[f64]| -> Option<Vec<f64>> {
        // argmax_{‖y‖_p = 1} ⟨z, y⟩ = sign(z)|z|^{q−1} / ‖z‖_q^{q−1}
        let scale = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return None;
        }
        let y: Vec<f64> = z.iter().map(|v| v.signum() * (v.abs() / scale).powf(q - 1.0)).collect();
        let n = lp_norm(&y, p);
        Some(y.into_iter().map(|v| v / n).collect())
    };

    let mut starts: Vec<Vec<f64>> = (0..k)
        .map(|i| {
            let mut e = vec![0.0; k];
            e[i] = 1.0;
            e
        })
        .collect();
    starts.push(to_sphere(&vec![1.0; k]).expect("nonzero"));

    let mut best = 0.0f64;
    for mut y in starts {
        let mut value = objective(&y);
        for _ in 0..NORM_ITERS {
            let z: Vec<f64> = (0..k).map(|i| (0..k).map(|j| g[(i, j)] * y[j]).sum()).collect();
            let Some(next) = to_sphere(&z) else { break };
            let next_value = objective(&next);
            if next_value <= value * (1.0 + NORM_STOP) {
                if next_value > value {
                    value = next_value;
                }
                break;
            }
            y = next;
            value = next_value;
        }
        best = best.max(value);
    }
    let cap = cols.iter().map(|c| norm(c).powf(q)).sum::<f64>().powf(1.0 / q);
    best.min(cap)
}
