use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bounds::{bound_report, BoundName, BoundRequest, BoundScheme};
use crate::{Error, Result};

/// A grid of `(K, m)` values at which to tabulate every applicable bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub scheme: BoundScheme,
    #[serde(rename = "K")]
    pub ks: Vec<usize>,
    pub ms: Vec<usize>,
    pub delta: f64,
    #[serde(default)]
    pub p: Option<f64>,
    /// Overrides for the scheme defaults.
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default)]
    pub b: Option<f64>,
    #[serde(default)]
    pub class_norm: Option<f64>,
    #[serde(default)]
    pub d: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub scheme: BoundScheme,
    #[serde(rename = "K")]
    pub k: usize,
    pub m: usize,
    pub delta: f64,
    pub bound_name: BoundName,
    pub value: f64,
}

fn sorted_unique(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Rows sorted by `(K, m)`, bounds in declaration order within each point.
pub fn run_bound_curve(spec: &CurveSpec) -> Result<Vec<CurveRow>> {
    if spec.ks.is_empty() || spec.ms.is_empty() {
        return Err(Error::InvalidParameter("curve needs at least one K and one m".into()));
    }
    let mut rows = Vec::new();
    for &k in &sorted_unique(&spec.ks) {
        for &m in &sorted_unique(&spec.ms) {
            let mut req = BoundRequest::for_scheme(spec.scheme, k, m, spec.delta, spec.p)?;
            if let Some(c) = spec.c {
                req.set_c(spec.scheme, c);
            }
            if let Some(b) = spec.b {
                req.b = b;
            }
            if let Some(n) = spec.class_norm {
                req.class_norm = n;
            }
            req.d = spec.d;
            let report = bound_report(&req, spec.scheme)?;
            rows.extend(report.applicable().into_iter().map(|(bound_name, value)| CurveRow {
                scheme: spec.scheme,
                k,
                m,
                delta: spec.delta,
                bound_name,
                value,
            }));
        }
    }
    Ok(rows)
}

/// Writes rows with header `scheme,K,m,delta,bound_name,value`.
pub fn write_curve_csv<W: std::io::Write>(rows: &[CurveRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: Path::new("<output>").to_path_buf(),
        source,
    })?;
    Ok(())
}
