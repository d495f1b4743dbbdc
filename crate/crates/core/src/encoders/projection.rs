//! Euclidean projections onto the codebooks used by the projected-gradient
//! encoders.

use crate::linalg::{lp_norm, norm};

/// Projection onto `{y : ‖y‖_1 ≤ radius}` by sorting magnitudes and
/// soft-thresholding at the KKT threshold. Exact, `O(K log K)`.
pub fn project_l1_ball(v: &[f64], radius: f64) -> Vec<f64> {
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    if l1 <= radius {
        return v.to_vec();
    }
    let mut u: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - radius) / (j + 1) as f64;
        if uj - t > 0.0 {
            theta = t;
        } else {
            break;
        }
    }
    v.iter().map(|&x| x.signum() * (x.abs() - theta).max(0.0)).collect()
}

/// Radial projection onto the unit `ℓ2` ball.
pub fn project_l2_ball(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    if n <= 1.0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / n).collect()
    }
}

/// Projection onto the unit `ℓp` ball for `p ≥ 1`.
///
/// For `p ∉ {1, 2}` there is no closed form. The KKT conditions give
/// `y_i + λ p y_i^{p−1} = |v_i|` per coordinate; each coordinate is solved by
/// safeguarded Newton and the multiplier `λ` by bisection on `Σ y_i^p = 1`.
pub fn project_lp_ball(v: &[f64], p: f64) -> Vec<f64> {
    if p == 1.0 {
        return project_l1_ball(v, 1.0);
    }
    if p == 2.0 {
        return project_l2_ball(v);
    }
    if lp_norm(v, p) <= 1.0 {
        return v.to_vec();
    }
    let a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
    let mass = |lambda: f64| -> f64 { a.iter().map(|&ai| solve_coord(ai, lambda, p).powf(p)).sum() };

    let mut lo = 0.0;
    let mut hi = 1.0;
    while mass(hi) > 1.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut y: Vec<f64> = v
        .iter()
        .zip(&a)
        .map(|(&vi, &ai)| vi.signum() * solve_coord(ai, hi, p))
        .collect();
    let n = lp_norm(&y, p);
    if n > 1.0 {
        y.iter_mut().for_each(|x| *x /= n);
    }
    y
}

/// Root in `[0, a]` of `y + λ p y^{p−1} = a`.
fn solve_coord(a: f64, lambda: f64, p: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    if lambda == 0.0 {
        return a;
    }
    let h = |y: f64| y + lambda * p * y.powf(p - 1.0) - a;
    let dh = |y: f64| 1.0 + lambda * p * (p - 1.0) * y.powf(p - 2.0);
    let (mut lo, mut hi) = (0.0, a);
    let mut y = 0.5 * a;
    for _ in 0..200 {
        let hy = h(y);
        if hy == 0.0 {
            return y;
        }
        if hy < 0.0 {
            lo = y;
        } else {
            hi = y;
        }
        if hi - lo <= a * 1e-16 {
            break;
        }
        let newton = y - hy / dh(y);
        y = if newton > lo && newton < hi && newton.is_finite() {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    y
}
