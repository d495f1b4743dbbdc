use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{Sampler, SamplerSpec};
use crate::bounds::{bound_report, BoundName, BoundRequest, BoundScheme};
use crate::encoders::empirical_risk;
use crate::scheme::{class_norm, SchemeKind, SchemeSpec};
use crate::trainers::{train, TrainConfig};
use crate::{Error, Result};

/// One repeated train/holdout experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationConfig {
    pub scheme: SchemeSpec,
    pub sampler: SamplerSpec,
    pub m: usize,
    /// Holdout size; defaults to `20 m`.
    #[serde(default)]
    pub holdout_m: Option<usize>,
    pub trials: usize,
    pub delta: f64,
    /// Bound to compare against; defaults to [`default_bound`].
    #[serde(default)]
    pub bound: Option<BoundName>,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub seed: u64,
}

impl DeviationConfig {
    pub fn holdout_size(&self) -> usize {
        self.holdout_m.unwrap_or(20 * self.m)
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        self.train.validate()?;
        if self.m == 0 || self.trials == 0 || self.holdout_size() == 0 {
            return Err(Error::InvalidParameter(
                "m, holdout_m and trials must be positive".into(),
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub training_risk: f64,
    pub holdout_risk: f64,
    /// `holdout_risk − training_risk`.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub scheme: SchemeSpec,
    #[serde(rename = "K")]
    pub k: usize,
    pub m: usize,
    pub holdout_m: usize,
    pub trials: usize,
    pub delta: f64,
    pub bound_name: BoundName,
    pub bound_value: f64,
    /// Fraction of trials with `|deviation| > bound_value`.
    pub violation_rate: f64,
    pub median_abs_deviation: f64,
    pub max_abs_deviation: f64,
    pub seed: u64,
    /// `holdout − training` risk per trial, in trial order.
    pub deviations: Vec<f64>,
    /// Per-trial detail; written as CSV rather than in the JSON summary.
    #[serde(skip)]
    pub outcomes: Vec<TrialOutcome>,
}

/// Bound request matching the class norm and range of `scheme`.
fn scheme_request(scheme: &SchemeSpec, m: usize, delta: f64) -> Result<BoundRequest> {
    let p = (scheme.kind == SchemeKind::SparseLp).then(|| scheme.p());
    let mut req = BoundRequest::for_scheme(scheme.kind.into(), scheme.k, m, delta, p)?;
    if scheme.kind == SchemeKind::KMeans {
        req.c = scheme.c.max(1.0);
        req.class_norm = class_norm(scheme).max(1.0);
        req.b = scheme.range_bound();
    }
    req.validate()?;
    Ok(req)
}

/// The scheme-specific bound used when none is named.
pub fn default_bound(scheme: &SchemeSpec) -> BoundName {
    match scheme.kind {
        SchemeKind::Pca => BoundName::Pca,
        SchemeKind::KMeans if scheme.c <= 1.0 => BoundName::Thm4Kmeans,
        SchemeKind::KMeans => BoundName::Thm2,
        SchemeKind::Nmf => BoundName::Nmf,
        SchemeKind::SparseLp => BoundName::Sparse,
    }
}

fn resolve_bound(scheme: &SchemeSpec, name: Option<BoundName>, m: usize, delta: f64) -> Result<(BoundName, f64)> {
    let name = name.unwrap_or_else(|| default_bound(scheme));
    let report = bound_report(&scheme_request(scheme, m, delta)?, BoundScheme::from(scheme.kind))?;
    let applicable = report.applicable();
    applicable
        .iter()
        .find(|(n, _)| *n == name)
        .copied()
        .ok_or_else(|| Error::SchemeBoundMismatch(format!("bound {name} does not apply to scheme {}", scheme.kind)))
}

fn run_trial(cfg: &DeviationConfig, sampler: &Sampler, trial: usize) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(trial as u64);
    let train_set = sampler.draw(cfg.m, &mut rng)?;
    let holdout = sampler.draw(cfg.holdout_size(), &mut rng)?;
    let train_cfg = TrainConfig {
        seed: rng.random(),
        ..cfg.train
    };
    let report = train(&cfg.scheme, &train_set, &train_cfg)?;
    let training_risk = empirical_risk(&report.dict, &train_set)?;
    let holdout_risk = empirical_risk(&report.dict, &holdout)?;
    Ok(TrialOutcome {
        trial,
        training_risk,
        holdout_risk,
        deviation: holdout_risk - training_risk,
    })
}

/// Trains on `m` fresh points per trial, evaluates on an independent holdout
/// and compares `|holdout − train|` with the chosen bound. Trials run in
/// parallel; the result does not depend on the thread count.
pub fn run_deviation_experiment(cfg: &DeviationConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let (bound_name, bound_value) = resolve_bound(&cfg.scheme, cfg.bound, cfg.m, cfg.delta)?;
    let sampler = Sampler::new(&cfg.sampler)?;
    let outcomes = (0..cfg.trials)
        .into_par_iter()
        .map(|t| run_trial(cfg, &sampler, t))
        .collect::<Result<Vec<_>>>()?;
    let abs: Vec<f64> = outcomes.iter().map(|o| o.deviation.abs()).collect();
    let violations = abs.iter().filter(|&&a| a > bound_value).count();
    Ok(ExperimentResult {
        scheme: cfg.scheme,
        k: cfg.scheme.k,
        m: cfg.m,
        holdout_m: cfg.holdout_size(),
        trials: cfg.trials,
        delta: cfg.delta,
        bound_name,
        bound_value,
        violation_rate: violations as f64 / cfg.trials as f64,
        median_abs_deviation: super::median(&abs),
        max_abs_deviation: abs.iter().copied().fold(0.0, f64::max),
        seed: cfg.seed,
        deviations: outcomes.iter().map(|o| o.deviation).collect(),
        outcomes,
    })
}

/// Writes one CSV row per trial.
pub fn write_trials_csv<W: std::io::Write>(result: &ExperimentResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for o in &result.outcomes {
        w.serialize(o)?;
    }
    w.flush().map_err(|source| Error::Io {
        path: Path::new("<output>").to_path_buf(),
        source,
    })?;
    Ok(())
}
