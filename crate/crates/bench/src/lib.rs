//! Fixtures shared by the benchmarks: seeded synthetic data and dictionaries.

use kcode_core::harness::{sample, Sampler, SamplerKind, SamplerSpec};
use kcode_core::{Dataset, Dictionary, SchemeKind, SchemeSpec};

/// Points drawn from the planted model of `scheme` with a little noise.
/// NMF data stays nonnegative.
pub fn planted_data(scheme: SchemeSpec, d: usize, m: usize, seed: u64) -> Dataset {
    sample(&planted_spec(scheme, d, seed), m).expect("valid sampler")
}

/// The planted dictionary behind [`planted_data`].
pub fn planted_dictionary(scheme: SchemeSpec, d: usize, seed: u64) -> Dictionary {
    let sampler = Sampler::new(&planted_spec(scheme, d, seed)).expect("valid sampler");
    let columns = sampler.planted_columns().expect("planted model").to_vec();
    Dictionary::new(scheme, columns).expect("planted columns satisfy the scheme")
}

/// Uniform points in the unit ball; nonnegative octant for NMF.
pub fn ball_data(kind: SchemeKind, d: usize, m: usize, seed: u64) -> Dataset {
    let data = sample(
        &SamplerSpec {
            kind: SamplerKind::UniformBall,
            d,
            seed,
        },
        m,
    )
    .expect("valid sampler");
    if kind != SchemeKind::Nmf {
        return data;
    }
    let rows = data.iter().map(|x| x.iter().map(|v| v.abs()).collect()).collect();
    Dataset::from_rows(rows).expect("abs preserves norms")
}

fn planted_spec(scheme: SchemeSpec, d: usize, seed: u64) -> SamplerSpec {
    SamplerSpec {
        kind: SamplerKind::PlantedDictionary { scheme, noise: 0.05 },
        d,
        seed,
    }
}

/// One representative scheme of each kind with `K` columns.
pub fn schemes(k: usize) -> [SchemeSpec; 5] {
    [
        SchemeSpec::pca(k),
        SchemeSpec::kmeans(k),
        SchemeSpec::nmf(k),
        SchemeSpec::sparse(k, 1.0),
        SchemeSpec::sparse(k, 1.5),
    ]
}

/// Short label such as `sparse-p1.5`.
pub fn label(scheme: &SchemeSpec) -> String {
    match scheme.kind {
        SchemeKind::SparseLp => format!("sparse-p{}", scheme.p()),
        kind => kind.to_string(),
    }
}
