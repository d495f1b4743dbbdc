//! Data points in the unit ball and dataset ingestion.

use std::fs;
use std::ops::Deref;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::linalg::norm;
use crate::tolerance::Tolerances;
use crate::{Error, Result};

/// A point of `R^d` with Euclidean norm at most one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DataPoint(Vec<f64>);

impl DataPoint {
    /// Wraps `coords`, rejecting points outside the unit ball.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let n = norm(&coords);
        if !(n <= 1.0 + Tolerances::DEFAULT.unit_ball) {
            return Err(Error::OutsideUnitBall { index: 0, norm: n });
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for DataPoint {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl AsRef<[f64]> for DataPoint {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// A nonempty sample of points sharing one ambient dimension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    points: Vec<DataPoint>,
    dim: usize,
}

impl Dataset {
    /// Builds a dataset from raw rows, rejecting ragged rows and rows outside
    /// the unit ball.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows_with(rows, &Tolerances::DEFAULT)
    }

    pub fn from_rows_with(rows: Vec<Vec<f64>>, tol: &Tolerances) -> Result<Self> {
        let dim = check_shape(&rows)?;
        let mut points = Vec::with_capacity(rows.len());
        for (index, row) in rows.into_iter().enumerate() {
            let n = norm(&row);
            if !(n <= 1.0 + tol.unit_ball) {
                return Err(Error::OutsideUnitBall { index, norm: n });
            }
            points.push(DataPoint(row));
        }
        Ok(Self { points, dim })
    }

    /// Builds a dataset scaled by `1 / max_i ‖x_i‖` so that it lies in the
    /// unit ball. A dataset of zero vectors is left unchanged.
    pub fn normalized(mut rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = check_shape(&rows)?;
        let max_norm = rows.iter().map(|r| norm(r)).fold(0.0f64, f64::max);
        if max_norm > 0.0 {
            for row in rows.iter_mut() {
                row.iter_mut().for_each(|v| *v /= max_norm);
                // Division can overshoot the unit sphere by an ulp.
                let n = norm(row);
                if n > 1.0 {
                    row.iter_mut().for_each(|v| *v /= n);
                }
            }
        }
        Ok(Self {
            points: rows.into_iter().map(DataPoint).collect(),
            dim,
        })
    }

    pub fn points(&self) -> &[DataPoint] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sample count `m`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DataPoint> {
        self.points.iter()
    }

    /// Mean of `‖x_i‖²`.
    pub fn mean_sq_norm(&self) -> f64 {
        self.points.iter().map(|p| crate::linalg::norm_sq(p)).sum::<f64>() / self.len() as f64
    }
}

impl<'de> Deserialize<'de> for Dataset {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(de)?;
        Dataset::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

fn check_shape(rows: &[Vec<f64>]) -> Result<usize> {
    let first = rows.first().ok_or(Error::EmptyDataset)?;
    let dim = first.len();
    if dim == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "row has no values".into(),
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::RaggedRow {
                line: i + 1,
                expected: dim,
                found: row.len(),
            });
        }
        if let Some(v) = row.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("non-finite value {v}"),
            });
        }
    }
    Ok(dim)
}

/// Reads a dataset from CSV (comma separated, no header) or from
/// line-delimited JSON arrays. The format is picked from the first
/// non-blank character: `[` means JSON lines.
///
/// With `normalize` set the points are scaled by the inverse of the largest
/// norm; otherwise rows outside the unit ball are rejected.
pub fn load_dataset(path: impl AsRef<Path>, normalize: bool) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let rows = parse_rows(&text)?;
    if normalize {
        Dataset::normalized(rows)
    } else {
        Dataset::from_rows(rows)
    }
}

/// Parses dataset text in either supported format.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows = match text.trim_start().chars().next() {
        None => return Err(Error::EmptyDataset),
        Some('[') => parse_json_lines(text)?,
        Some(_) => parse_csv(text)?,
    };
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(rows)
}

fn parse_json_lines(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        rows.push(row);
    }
    Ok(rows)
}

fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field.parse::<f64>().map_err(|_| Error::Parse {
                    line,
                    message: format!("not a number: {field:?}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}
