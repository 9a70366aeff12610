//! Test complexes with known or oracle-computable spectra.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// A named construction and its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    SingleSimplex { n: usize },
    Complete { vertices: usize, n: usize },
    CompleteMultipartite { sizes: Vec<usize> },
    CrossPolytope { n: usize },
    RandomPure { vertices: usize, n: usize, p: f64, seed: u64 },
    RandomPartite { sizes: Vec<usize>, p: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<(SimplicialComplex, Option<Partition>)> {
        match self {
            GeneratorSpec::SingleSimplex { n } => Ok((single_simplex(*n)?, None)),
            GeneratorSpec::Complete { vertices, n } => Ok((complete_complex(*vertices, *n)?, None)),
            GeneratorSpec::CompleteMultipartite { sizes } => {
                complete_multipartite(sizes).map(|(x, p)| (x, Some(p)))
            }
            GeneratorSpec::CrossPolytope { n } => cross_polytope(*n).map(|(x, p)| (x, Some(p))),
            GeneratorSpec::RandomPure {
                vertices,
                n,
                p,
                seed,
            } => Ok((random_pure_complex(*vertices, *n, *p, *seed)?, None)),
            GeneratorSpec::RandomPartite { sizes, p, seed } => {
                random_partite_complex(sizes, *p, *seed).map(|(x, p)| (x, Some(p)))
            }
        }
    }
}

pub fn single_simplex(n: usize) -> Result<SimplicialComplex> {
    if n < 1 {
        return Err(Error::BadParams("single simplex needs n >= 1".into()));
    }
    SimplicialComplex::from_facets([0..=n])
}

/// All `(n+1)`-subsets of `vertices` vertices.
pub fn complete_complex(vertices: usize, n: usize) -> Result<SimplicialComplex> {
    if vertices < n + 1 {
        return Err(Error::BadParams(format!(
            "complete complex of dimension {n} needs at least {} vertices",
            n + 1
        )));
    }
    SimplicialComplex::from_facets((0..vertices).combinations(n + 1))
}

fn sides_for(sizes: &[usize]) -> Result<Vec<Vec<usize>>> {
    if sizes.len() < 2 || sizes.contains(&0) {
        return Err(Error::BadParams(
            "multipartite complex needs at least two non-empty parts".into(),
        ));
    }
    let mut next = 0;
    Ok(sizes
        .iter()
        .map(|&s| {
            let side: Vec<usize> = (next..next + s).collect();
            next += s;
            side
        })
        .collect())
}

/// Every transversal of the parts is a facet. Vertices are numbered part by part.
pub fn complete_multipartite(sizes: &[usize]) -> Result<(SimplicialComplex, Partition)> {
    let sides = sides_for(sizes)?;
    let x = SimplicialComplex::from_facets(
        sides.iter().map(|s| s.iter().copied()).multi_cartesian_product(),
    )?;
    Ok((x, Partition::from_sides(&sides)))
}

/// Boundary of the `(n+1)`-dimensional cross-polytope: `n + 1` parts of size two.
pub fn cross_polytope(n: usize) -> Result<(SimplicialComplex, Partition)> {
    if n < 1 {
        return Err(Error::BadParams("cross-polytope needs n >= 1".into()));
    }
    complete_multipartite(&vec![2; n + 1])
}

fn accept(x: SimplicialComplex) -> Result<SimplicialComplex> {
    let report = x.check_all_links_connected();
    if let Some(bad) = report.failures().next() {
        return Err(Error::Rejected(format!(
            "1-skeleton of the link of {} is disconnected",
            bad.tau
        )));
    }
    Ok(x)
}

/// Keeps each `(n+1)`-subset independently with probability `p`.
///
/// Rejected unless every link of dimension at least one has a connected
/// 1-skeleton. Deterministic in `seed`.
pub fn random_pure_complex(vertices: usize, n: usize, p: f64, seed: u64) -> Result<SimplicialComplex> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::BadParams(format!("probability {p} not in (0, 1]")));
    }
    if n < 1 || vertices < n + 1 {
        return Err(Error::BadParams(format!(
            "need n >= 1 and at least n + 1 vertices, got n = {n}, {vertices} vertices"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let facets: Vec<Vec<usize>> = (0..vertices)
        .combinations(n + 1)
        .filter(|_| rng.gen_bool(p))
        .collect();
    if facets.is_empty() {
        return Err(Error::Rejected("no facets kept".into()));
    }
    accept(SimplicialComplex::from_facets(facets)?)
}

/// Keeps each transversal of the parts independently with probability `p`.
pub fn random_partite_complex(
    sizes: &[usize],
    p: f64,
    seed: u64,
) -> Result<(SimplicialComplex, Partition)> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::BadParams(format!("probability {p} not in (0, 1]")));
    }
    let sides = sides_for(sizes)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let facets: Vec<Vec<usize>> = sides
        .iter()
        .map(|s| s.iter().copied())
        .multi_cartesian_product()
        .filter(|_| rng.gen_bool(p))
        .collect();
    if facets.is_empty() {
        return Err(Error::Rejected("no facets kept".into()));
    }
    let x = accept(SimplicialComplex::from_facets(facets)?)?;
    let partition = Partition::from_sides(&sides).restrict(&x);
    Ok((x, partition))
}

/// Seeded facet weights drawn from `{1/16, 2/16, .., 4}`; exact in binary and decimal.
pub fn random_facet_weights(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(1..=64u32) as f64 / 16.0).collect()
}
