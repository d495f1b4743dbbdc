//! Monte-Carlo validation of the deviation bounds: synthetic distributions
//! on the unit ball, repeated train/holdout experiments and bound tables.

mod curve;
mod experiment;
mod sampler;

pub use curve::{run_bound_curve, write_curve_csv, CurveRow, CurveSpec};
pub use experiment::{
    default_bound, run_deviation_experiment, write_trials_csv, DeviationConfig, ExperimentResult, TrialOutcome,
};
pub use sampler::{sample, Sampler, SamplerKind, SamplerSpec};

/// Median of a slice (mean of the two middle values for even lengths).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
