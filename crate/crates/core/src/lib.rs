//! K-dimensional coding schemes.
//!
//! A coding scheme represents a point `x` of the unit ball by a code `y` drawn
//! from a codebook `Y ⊆ R^K`, reconstructed through a linear map `T: R^K -> R^d`
//! stored as `K` columns. The reconstruction error is
//! `f_T(x) = min_{y ∈ Y} ‖x − Ty‖²`, and training picks `T` in a constrained
//! class to minimize the average error over a sample.
//!
//! The crate is organised as:
//!
//! * [`data`], [`scheme`], [`dictionary`]: domain types shared by everything else.
//! * [`encoders`]: per-point constrained projections for PCA, K-means, NMF and
//!   `ℓp` sparse coding, plus a brute-force oracle used to certify them.
//! * [`trainers`]: empirical risk minimization over each operator class.
//! * [`bounds`]: closed-form uniform deviation bounds.
//! * [`harness`]: synthetic samplers and Monte-Carlo deviation experiments.

// `!(x >= a)` is used deliberately so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod data;
pub mod dictionary;
pub mod encoders;
mod error;
pub mod harness;
pub mod linalg;
pub mod scheme;
pub mod tolerance;
pub mod trainers;

pub use bounds::{BoundReport, BoundRequest, BoundScheme};
pub use data::{load_dataset, DataPoint, Dataset};
pub use dictionary::{codebook_norm, Code, Dictionary};
pub use encoders::{empirical_risk, encode, EncodeResult, Encoder};
pub use error::{Error, Result};
pub use scheme::{class_norm, SchemeKind, SchemeSpec};
pub use tolerance::Tolerances;
pub use trainers::{train, Init, TrainConfig, TrainReport};
