use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::Dataset;
use crate::linalg::{combine, gram_schmidt, lp_norm, norm};
use crate::scheme::{SchemeKind, SchemeSpec};
use crate::{Error, Result};

fn default_sigma() -> f64 {
    0.5
}

fn default_center_radius() -> f64 {
    0.7
}

/// Distribution family of a synthetic sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SamplerKind {
    /// Uniform on the unit ball.
    UniformBall,
    /// `B z + noise` with `B` a random orthonormal basis of a subspace and
    /// `z ~ N(0, σ² I)`.
    SubspaceGaussianClipped {
        subspace_dim: usize,
        #[serde(default = "default_sigma")]
        sigma: f64,
        #[serde(default)]
        noise: f64,
    },
    /// `T y + noise` with `T` a random dictionary of the given scheme and `y`
    /// drawn from its codebook. For NMF the noisy point is clamped to the
    /// nonnegative orthant.
    PlantedDictionary {
        scheme: SchemeSpec,
        #[serde(default)]
        noise: f64,
    },
    /// Equal-weight Gaussian clusters around centers drawn uniformly from the
    /// ball of radius `center_radius`.
    ClusterMixture {
        clusters: usize,
        spread: f64,
        #[serde(default = "default_center_radius")]
        center_radius: f64,
    },
}

/// A sampler: distribution family, ambient dimension and the seed that fixes
/// both the distribution's random parameters and [`sample`]'s draws.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplerSpec {
    #[serde(flatten)]
    pub kind: SamplerKind,
    pub d: usize,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone)]
enum Model {
    UniformBall,
    Subspace {
        basis: Vec<Vec<f64>>,
        sigma: f64,
        noise: f64,
    },
    Planted {
        scheme: SchemeSpec,
        columns: Vec<Vec<f64>>,
        noise: f64,
    },
    Clusters {
        centers: Vec<Vec<f64>>,
        spread: f64,
    },
}

/// A distribution on the unit ball with its random parameters fixed.
#[derive(Debug, Clone)]
pub struct Sampler {
    d: usize,
    model: Model,
}

fn gaussian(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..dim).map(|_| StandardNormal.sample(rng)).collect()
}

fn unit_direction(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let g = gaussian(dim, rng);
        let n = norm(&g);
        if n > 1e-12 {
            return g.into_iter().map(|v| v / n).collect();
        }
    }
}

fn uniform_ball(dim: usize, radius: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let r = radius * rng.random::<f64>().powf(1.0 / dim as f64);
    unit_direction(dim, rng).into_iter().map(|v| v * r).collect()
}

fn random_orthonormal(dim: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    loop {
        let raw: Vec<Vec<f64>> = (0..k).map(|_| gaussian(dim, rng)).collect();
        if let Some(q) = gram_schmidt(&raw) {
            return q;
        }
    }
}

/// Rescales `x` onto the unit sphere if it lies outside the ball.
fn clip_to_ball(mut x: Vec<f64>) -> Vec<f64> {
    let n = norm(&x);
    if n > 1.0 {
        x.iter_mut().for_each(|v| *v /= n);
        // Rounding can leave the norm a few ulps above 1.
        while norm(&x) > 1.0 {
            x.iter_mut().for_each(|v| *v *= 1.0 - f64::EPSILON);
        }
    }
    x
}

impl Sampler {
    pub fn new(spec: &SamplerSpec) -> Result<Self> {
        let d = spec.d;
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if d == 0 {
            return bad("sampler dimension must be at least 1".into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let model = match &spec.kind {
            SamplerKind::UniformBall => Model::UniformBall,
            SamplerKind::SubspaceGaussianClipped {
                subspace_dim,
                sigma,
                noise,
            } => {
                if *subspace_dim == 0 || *subspace_dim > d {
                    return bad(format!("subspace_dim must lie in 1..={d}, got {subspace_dim}"));
                }
                if !(*sigma >= 0.0 && *noise >= 0.0) {
                    return bad("sigma and noise must be nonnegative".into());
                }
                Model::Subspace {
                    basis: random_orthonormal(d, *subspace_dim, &mut rng),
                    sigma: *sigma,
                    noise: *noise,
                }
            }
            SamplerKind::PlantedDictionary { scheme, noise } => {
                scheme.validate()?;
                if !(*noise >= 0.0) {
                    return bad("noise must be nonnegative".into());
                }
                let k = scheme.k;
                let columns = match scheme.kind {
                    SchemeKind::Pca => {
                        if k > d {
                            return bad(format!("planted PCA needs K ≤ d, got K = {k}, d = {d}"));
                        }
                        random_orthonormal(d, k, &mut rng)
                    }
                    SchemeKind::KMeans => (0..k).map(|_| uniform_ball(d, scheme.c.min(1.0), &mut rng)).collect(),
                    SchemeKind::Nmf => (0..k)
                        .map(|_| unit_direction(d, &mut rng).into_iter().map(f64::abs).collect())
                        .collect(),
                    SchemeKind::SparseLp => (0..k).map(|_| unit_direction(d, &mut rng)).collect(),
                };
                Model::Planted {
                    scheme: *scheme,
                    columns,
                    noise: *noise,
                }
            }
            SamplerKind::ClusterMixture {
                clusters,
                spread,
                center_radius,
            } => {
                if *clusters == 0 {
                    return bad("clusters must be at least 1".into());
                }
                if !(*spread >= 0.0 && *center_radius >= 0.0 && *center_radius <= 1.0) {
                    return bad("spread must be ≥ 0 and center_radius in [0, 1]".into());
                }
                Model::Clusters {
                    centers: (0..*clusters)
                        .map(|_| uniform_ball(d, *center_radius, &mut rng))
                        .collect(),
                    spread: *spread,
                }
            }
        };
        Ok(Self { d, model })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Planted columns, for [`SamplerKind::PlantedDictionary`].
    pub fn planted_columns(&self) -> Option<&[Vec<f64>]> {
        match &self.model {
            Model::Planted { columns, .. } => Some(columns),
            _ => None,
        }
    }

    /// Cluster centers, for [`SamplerKind::ClusterMixture`].
    pub fn cluster_centers(&self) -> Option<&[Vec<f64>]> {
        match &self.model {
            Model::Clusters { centers, .. } => Some(centers),
            _ => None,
        }
    }

    fn draw_one(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let d = self.d;
        let add_noise = |mut x: Vec<f64>, sigma: f64, rng: &mut ChaCha8Rng| {
            if sigma > 0.0 {
                x.iter_mut().zip(gaussian(d, rng)).for_each(|(v, g)| *v += sigma * g);
            }
            x
        };
        match &self.model {
            Model::UniformBall => uniform_ball(d, 1.0, rng),
            Model::Subspace { basis, sigma, noise } => {
                let z: Vec<f64> = gaussian(basis.len(), rng).into_iter().map(|v| v * sigma).collect();
                clip_to_ball(add_noise(combine(basis, &z, d), *noise, rng))
            }
            Model::Planted { scheme, columns, noise } => {
                let k = columns.len();
                let y: Vec<f64> = match scheme.kind {
                    SchemeKind::KMeans => {
                        let mut e = vec![0.0; k];
                        e[rng.random_range(0..k)] = 1.0;
                        e
                    }
                    SchemeKind::Pca => uniform_ball(k, 1.0, rng),
                    SchemeKind::Nmf => uniform_ball(k, 1.0, rng).into_iter().map(f64::abs).collect(),
                    SchemeKind::SparseLp => {
                        let p = scheme.p();
                        let g = gaussian(k, rng);
                        let n = lp_norm(&g, p);
                        let r = rng.random::<f64>().powf(1.0 / k as f64);
                        g.into_iter().map(|v| v / n * r).collect()
                    }
                };
                let mut x = add_noise(combine(columns, &y, d), *noise, rng);
                if scheme.kind == SchemeKind::Nmf {
                    x.iter_mut().for_each(|v| *v = v.max(0.0));
                }
                clip_to_ball(x)
            }
            Model::Clusters { centers, spread } => {
                let c = &centers[rng.random_range(0..centers.len())];
                clip_to_ball(add_noise(c.clone(), *spread, rng))
            }
        }
    }

    /// `n` i.i.d. points.
    pub fn draw(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<Dataset> {
        if n == 0 {
            return Err(Error::EmptyDataset);
        }
        let rows = (0..n).map(|_| self.draw_one(rng)).collect();
        Dataset::from_rows(rows)
    }
}

/// `n` i.i.d. points from `spec`, deterministic in `spec.seed`.
pub fn sample(spec: &SamplerSpec, n: usize) -> Result<Dataset> {
    let sampler = Sampler::new(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(1);
    sampler.draw(n, &mut rng)
}
