use rand_chacha::ChaCha8Rng;

use super::{
    best_of_restarts, clip_norm, code_moments, dictionary_gradient, distinct_points, fixed_code_risk, gaussian_unit,
    relative_decrease, Init, TrainConfig, TrainReport,
};
use crate::data::Dataset;
use crate::dictionary::Dictionary;
use crate::encoders::Encoder;
use crate::linalg::{max_eigenvalue, norm, pinv_solve};
use crate::scheme::SchemeSpec;
use crate::Result;

const MAX_HALVINGS: usize = 40;

/// Alternating minimization for `ℓp`-ball sparse coding with columns in the
/// unit ball.
///
/// Codes come from the `ℓp` encoder. The dictionary target is the
/// least-squares fit on columns that some code uses, clipped to norm ≤ 1; the
/// step towards it is halved until the fixed-code risk does not increase. If
/// no step length helps, one projected-gradient step is taken instead.
pub fn train_sparse(data: &Dataset, k: usize, p: f64, cfg: &TrainConfig) -> Result<TrainReport> {
    let scheme = SchemeSpec::sparse(k, p);
    scheme.validate()?;
    cfg.validate()?;
    best_of_restarts(cfg, |rng| alternate(data, &scheme, cfg, rng))
}

fn initial_columns(data: &Dataset, k: usize, init: Init, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    Ok(match init {
        Init::RandomData => distinct_points(data, k, rng, |x| norm(x) > 0.0)?,
        Init::RandomGaussianNormalized => (0..k).map(|_| gaussian_unit(data.dim(), rng)).collect(),
    })
}

fn encode(data: &Dataset, scheme: &SchemeSpec, columns: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, f64)> {
    let results = Encoder::from_columns(*scheme, columns).encode_all(data)?;
    let risk = results.iter().map(|r| r.error).sum::<f64>() / results.len() as f64;
    Ok((results.into_iter().map(|r| r.code.0).collect(), risk))
}

fn alternate(
    data: &Dataset,
    scheme: &SchemeSpec,
    cfg: &TrainConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(Dictionary, Vec<f64>, bool)> {
    let mut columns = initial_columns(data, scheme.k, cfg.init, rng)?;
    let (mut codes, mut risk) = encode(data, scheme, &columns)?;
    let mut trace = vec![risk];
    let mut converged = false;
    for _ in 0..cfg.max_outer_iters {
        let Some(next_columns) = dictionary_step(data, &columns, &codes) else {
            converged = true;
            break;
        };
        let (next_codes, next_risk) = encode(data, scheme, &next_columns)?;
        if next_risk > risk {
            converged = true;
            break;
        }
        let rel = relative_decrease(risk, next_risk);
        columns = next_columns;
        codes = next_codes;
        risk = next_risk;
        trace.push(risk);
        if rel < cfg.tol {
            converged = true;
            break;
        }
    }
    Ok((Dictionary::new(*scheme, columns)?, trace, converged))
}

/// Returns new columns with fixed-code risk no larger than the current one,
/// or `None` if no descent step could be found.
fn dictionary_step(data: &Dataset, columns: &[Vec<f64>], codes: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let k = columns.len();
    let (a, b) = code_moments(data, codes, k);
    let current = fixed_code_risk(data, columns, codes);

    // least squares on the active columns: T_S A_SS = B_S
    let active: Vec<usize> = (0..k).filter(|&i| a[(i, i)] > 0.0).collect();
    if active.is_empty() {
        return None;
    }
    let sub = nalgebra::DMatrix::from_fn(active.len(), active.len(), |i, j| a[(active[i], active[j])]);
    let mut target = columns.to_vec();
    for row in 0..data.dim() {
        let rhs: Vec<f64> = active.iter().map(|&i| b[i][row]).collect();
        let sol = pinv_solve(&sub, &rhs);
        for (&i, v) in active.iter().zip(sol) {
            target[i][row] = v;
        }
    }
    target.iter_mut().for_each(|c| clip_norm(c, 1.0));

    let mut step = 1.0;
    for _ in 0..MAX_HALVINGS {
        let cand: Vec<Vec<f64>> = columns
            .iter()
            .zip(&target)
            .map(|(c, t)| c.iter().zip(t).map(|(cv, tv)| cv + step * (tv - cv)).collect())
            .collect();
        if fixed_code_risk(data, &cand, codes) < current {
            return Some(cand);
        }
        step *= 0.5;
    }

    // projected gradient with step 1/L on the convex column-ball constraint
    let lipschitz = 2.0 * max_eigenvalue(&a);
    let grad = dictionary_gradient(columns, &a, &b);
    let cand: Vec<Vec<f64>> = columns
        .iter()
        .zip(&grad)
        .map(|(c, g)| {
            let mut v: Vec<f64> = c.iter().zip(g).map(|(cv, gv)| cv - gv / lipschitz).collect();
            clip_norm(&mut v, 1.0);
            v
        })
        .collect();
    (fixed_code_risk(data, &cand, codes) < current).then_some(cand)
}
