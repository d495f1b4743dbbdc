use rand_chacha::ChaCha8Rng;

use super::{
    best_of_restarts, code_moments, dictionary_gradient, distinct_points, gaussian_unit, relative_decrease, Init,
    TrainConfig, TrainReport,
};
use crate::data::Dataset;
use crate::dictionary::Dictionary;
use crate::encoders::Encoder;
use crate::linalg::{max_eigenvalue, norm};
use crate::scheme::SchemeSpec;
use crate::{Error, Result};

/// Projected-gradient steps on the dictionary per outer iteration.
const DICT_STEPS: usize = 10;

/// Alternating minimization for NMF.
///
/// Codes come from the NNLS encoder. The dictionary step runs projected
/// gradient on the fixed-code risk, projecting each column onto
/// `{t ≥ 0, ‖t‖ = 1}` (clamp, then renormalize). Coordinate-nonnegative unit
/// columns have nonnegative pairwise inner products, so iterates stay in the
/// operator class. This requires coordinate-nonnegative data.
pub fn train_nmf(data: &Dataset, k: usize, cfg: &TrainConfig) -> Result<TrainReport> {
    let scheme = SchemeSpec::nmf(k);
    scheme.validate()?;
    cfg.validate()?;
    if let Some(index) = data.iter().position(|x| x.iter().any(|&v| v < 0.0)) {
        return Err(Error::UnsupportedForNmf { index });
    }
    best_of_restarts(cfg, |rng| alternate(data, &scheme, cfg, rng))
}

fn initial_columns(data: &Dataset, k: usize, init: Init, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    Ok(match init {
        Init::RandomData => distinct_points(data, k, rng, |x| norm(x) > 0.0)?
            .into_iter()
            .map(|v| {
                let n = norm(&v);
                v.into_iter().map(|x| x / n).collect()
            })
            .collect(),
        Init::RandomGaussianNormalized => (0..k)
            .map(|_| gaussian_unit(data.dim(), rng).into_iter().map(f64::abs).collect())
            .collect(),
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

/// A few projected-gradient steps with step `1/L` on the fixed-code risk.
/// With an exact projection each step cannot increase that risk, even though
/// the constraint set is not convex. Returns `None` when all codes vanish.
fn dictionary_step(data: &Dataset, columns: &[Vec<f64>], codes: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let k = columns.len();
    let (a, b) = code_moments(data, codes, k);
    let lipschitz = 2.0 * max_eigenvalue(&a);
    if !(lipschitz > 0.0) {
        return None;
    }
    let mut cols = columns.to_vec();
    for _ in 0..DICT_STEPS {
        let grad = dictionary_gradient(&cols, &a, &b);
        let mut moved = 0.0f64;
        for (col, g) in cols.iter_mut().zip(&grad) {
            let stepped: Vec<f64> = col.iter().zip(g).map(|(c, gv)| c - gv / lipschitz).collect();
            let projected = project_unit_nonneg(&stepped);
            moved = moved.max(crate::linalg::sq_dist(col, &projected));
            *col = projected;
        }
        if moved < 1e-30 {
            break;
        }
    }
    Some(cols)
}

/// Nearest point of `{t ≥ 0, ‖t‖ = 1}` to `v`: maximizes `⟨v, t⟩` over the
/// set. If `v` has no positive entry, the best basis vector.
fn project_unit_nonneg(v: &[f64]) -> Vec<f64> {
    let pos: Vec<f64> = v.iter().map(|x| x.max(0.0)).collect();
    let n = norm(&pos);
    if n > 0.0 {
        return pos.into_iter().map(|x| x / n).collect();
    }
    let best = v
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, &x)| if x > b.1 { (i, x) } else { b })
        .0;
    let mut e = vec![0.0; v.len()];
    e[best] = 1.0;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_data() {
        let data = Dataset::from_rows(vec![vec![0.1, 0.2], vec![0.3, -0.1]]).unwrap();
        assert!(matches!(
            train_nmf(&data, 1, &TrainConfig::default()),
            Err(Error::UnsupportedForNmf { index: 1 })
        ));
    }

    #[test]
    fn single_direction() {
        let v = vec![0.6, 0.0, 0.8];
        let data = Dataset::from_rows(vec![v.clone(); 5]).unwrap();
        let rep = train_nmf(&data, 1, &TrainConfig::default()).unwrap();
        for (a, b) in rep.dict.columns()[0].iter().zip(&v) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(rep.final_risk() < 1e-20);
    }

    #[test]
    fn planted_columns_recovered() {
        let s = 0.5f64.sqrt();
        let cols = vec![vec![s, s, 0.0, 0.0], vec![0.0, 0.0, 0.6, 0.8]];
        let data = Dataset::from_rows(cols.clone()).unwrap();
        let rep = train_nmf(&data, 2, &TrainConfig::default()).unwrap();
        assert!(rep.final_risk() <= 1e-6);
    }

    #[test]
    fn projection_onto_unit_nonneg() {
        assert_eq!(project_unit_nonneg(&[3.0, -1.0, 4.0]), vec![0.6, 0.0, 0.8]);
        assert_eq!(project_unit_nonneg(&[-3.0, -1.0]), vec![0.0, 1.0]);
    }
}
