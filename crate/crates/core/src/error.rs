use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: expected {expected} values, found {found}")]
    RaggedRow { line: usize, expected: usize, found: usize },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("point {index} has norm {norm} > 1; pass normalize to rescale the dataset")]
    OutsideUnitBall { index: usize, norm: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid scheme: {0}")]
    InvalidScheme(String),
    #[error("invalid dictionary: {0}")]
    InvalidDictionary(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cannot initialize {k} distinct atoms from {available} distinct usable points")]
    DegenerateInit { k: usize, available: usize },
    #[error("NMF training requires coordinate-nonnegative data; point {index} has a negative entry")]
    UnsupportedForNmf { index: usize },
    #[error("K = {k} exceeds the supported maximum {max}")]
    KTooLarge { k: usize, max: usize },
    #[error("bound precondition violated: {0}")]
    BoundPrecondition(String),
    #[error("scheme/bound mismatch: {0}")]
    SchemeBoundMismatch(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
