//! Balanced weight functions on simplicial complexes.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::simplex::Simplex;

/// Relative tolerance for the balance condition.
pub const BALANCE_TOLERANCE: f64 = 1e-10;

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Strictly positive values on every simplex of a complex, stored level by
/// level in the complex's canonical order.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction {
    values: Vec<Vec<f64>>,
}

impl WeightFunction {
    /// Wraps raw values. Only shape and positivity are checked; balance is not.
    pub fn from_values(x: &SimplicialComplex, values: Vec<Vec<f64>>) -> Result<Self> {
        let n = x.dim() as isize;
        if values.len() != x.dim() + 2 {
            return Err(Error::Validation(format!(
                "expected weights on {} levels, got {}",
                x.dim() + 2,
                values.len()
            )));
        }
        for k in -1..=n {
            let level = &values[(k + 1) as usize];
            if level.len() != x.count(k) {
                return Err(Error::Validation(format!(
                    "level {k} has {} weights for {} simplices",
                    level.len(),
                    x.count(k)
                )));
            }
            for (s, &w) in x.simplices(k).iter().zip(level) {
                if !(w > 0.0 && w.is_finite()) {
                    return Err(Error::NonPositiveWeight {
                        simplex: s.clone(),
                        value: w,
                    });
                }
            }
        }
        Ok(WeightFunction { values })
    }

    pub fn level(&self, k: isize) -> &[f64] {
        &self.values[(k + 1) as usize]
    }

    pub fn get(&self, k: isize, i: usize) -> f64 {
        self.values[(k + 1) as usize][i]
    }

    pub fn of(&self, x: &SimplicialComplex, s: &Simplex) -> Option<f64> {
        x.index_of(s).map(|i| self.get(s.dim(), i))
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

/// Extends facet weights downward by `m(τ) = Σ_{σ ⊃ τ, dim σ = dim τ + 1} m(σ)`.
pub fn extend_top_weight(
    x: &SimplicialComplex,
    top: &BTreeMap<Simplex, f64>,
) -> Result<WeightFunction> {
    let n = x.dim() as isize;
    for s in top.keys() {
        if s.dim() != n || !x.contains(s) {
            return Err(Error::SimplexNotInComplex(s.clone()));
        }
    }
    let mut facet_values = Vec::with_capacity(x.count(n));
    for f in x.facets() {
        let w = *top.get(f).ok_or_else(|| Error::MissingFacet(f.clone()))?;
        facet_values.push(w);
    }
    extend_top_values(x, &facet_values)
}

/// Same as [`extend_top_weight`] with values listed in facet order.
pub fn extend_top_values(x: &SimplicialComplex, facet_values: &[f64]) -> Result<WeightFunction> {
    let n = x.dim() as isize;
    if facet_values.len() != x.count(n) {
        return Err(Error::Validation(format!(
            "{} facet weights for {} facets",
            facet_values.len(),
            x.count(n)
        )));
    }
    for (f, &w) in x.facets().iter().zip(facet_values) {
        if !(w > 0.0 && w.is_finite()) {
            return Err(Error::NonPositiveWeight {
                simplex: f.clone(),
                value: w,
            });
        }
    }
    let mut values = vec![Vec::new(); x.dim() + 2];
    values[x.dim() + 1] = facet_values.to_vec();
    for k in (-1..n).rev() {
        let above = &values[(k + 2) as usize];
        let level: Vec<f64> = (0..x.count(k))
            .map(|i| x.cofaces(k, i).iter().map(|&j| above[j]).sum())
            .collect();
        values[(k + 1) as usize] = level;
    }
    WeightFunction::from_values(x, values)
}

/// Facet weights all 1.
pub fn homogeneous_weight(x: &SimplicialComplex) -> WeightFunction {
    extend_top_values(x, &vec![1.0; x.facets().len()]).expect("unit weights are valid")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BalanceViolation {
    pub simplex: Simplex,
    pub weight: f64,
    pub coface_sum: f64,
    pub relative_error: f64,
}

/// Every simplex below the top whose weight differs from its coface sum.
pub fn verify_balanced(x: &SimplicialComplex, m: &WeightFunction) -> Vec<BalanceViolation> {
    let mut out = Vec::new();
    for k in -1..(x.dim() as isize) {
        for (i, s) in x.simplices(k).iter().enumerate() {
            let weight = m.get(k, i);
            let coface_sum: f64 = x.cofaces(k, i).iter().map(|&j| m.get(k + 1, j)).sum();
            let relative_error = (weight - coface_sum).abs() / weight.abs().max(coface_sum.abs());
            if relative_error > BALANCE_TOLERANCE {
                out.push(BalanceViolation {
                    simplex: s.clone(),
                    weight,
                    coface_sum,
                    relative_error,
                });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightIdentityReport {
    pub checks: usize,
    pub max_relative_error: f64,
    pub failures: Vec<String>,
}

impl WeightIdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `m(τ)/(l−k)! = Σ_{σ ∈ X^(l), τ ⊂ σ} m(σ)` for every `-1 ≤ k < l ≤ n`
/// (the case `l = n` being the facet-sum formula).
pub fn verify_weight_identities(x: &SimplicialComplex, m: &WeightFunction) -> WeightIdentityReport {
    let n = x.dim() as isize;
    let mut checks = 0;
    let mut max_relative_error: f64 = 0.0;
    let mut failures = Vec::new();
    for k in -1..n {
        for (i, tau) in x.simplices(k).iter().enumerate() {
            let lhs_base = m.get(k, i);
            for l in (k + 1)..=n {
                let lhs = lhs_base / factorial((l - k) as usize);
                let rhs: f64 = x
                    .simplices(l)
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| tau.is_face_of(s))
                    .map(|(j, _)| m.get(l, j))
                    .sum();
                let err = (lhs - rhs).abs() / lhs.abs().max(rhs.abs());
                checks += 1;
                max_relative_error = max_relative_error.max(err);
                if err > BALANCE_TOLERANCE {
                    failures.push(format!("tau={tau}, l={l}: {lhs} vs {rhs}"));
                }
            }
        }
    }
    WeightIdentityReport {
        checks,
        max_relative_error,
        failures,
    }
}

/// The induced weight `m_τ(σ) = m(τ ∪ σ)` on the link of `tau`.
pub fn link_weight(
    x: &SimplicialComplex,
    m: &WeightFunction,
    tau: &Simplex,
) -> Result<(SimplicialComplex, WeightFunction)> {
    let link = x.link(tau)?;
    let values = (-1..=link.dim() as isize)
        .map(|k| {
            link.simplices(k)
                .iter()
                .map(|s| m.of(x, &s.union(tau)).expect("link simplex joins tau inside X"))
                .collect()
        })
        .collect();
    let weights = WeightFunction::from_values(&link, values)?;
    Ok((link, weights))
}

/// The per-dimension probability normalisation of the homogeneous weight,
/// `w(τ) = m(τ)·(k+1)! / ((n+1)!·|X^(n)|)`. Not balanced.
pub fn to_probability_weight(x: &SimplicialComplex, m: &WeightFunction) -> WeightFunction {
    let n = x.dim();
    let facets = x.count(n as isize) as f64;
    let values = (-1..=n as isize)
        .map(|k| {
            let scale = factorial((k + 1) as usize) / (factorial(n + 1) * facets);
            m.level(k).iter().map(|w| w * scale).collect()
        })
        .collect();
    WeightFunction::from_values(x, values).expect("scaling preserves positivity")
}

/// A complex together with a balanced weight function.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedComplex {
    complex: SimplicialComplex,
    weights: WeightFunction,
}

impl WeightedComplex {
    pub fn new(complex: SimplicialComplex, weights: WeightFunction) -> Result<Self> {
        let violations = verify_balanced(&complex, &weights);
        if !violations.is_empty() {
            return Err(Error::Unbalanced(violations.len()));
        }
        Ok(WeightedComplex { complex, weights })
    }

    pub fn homogeneous(complex: SimplicialComplex) -> Self {
        let weights = homogeneous_weight(&complex);
        WeightedComplex { complex, weights }
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn weights(&self) -> &WeightFunction {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn link(&self, tau: &Simplex) -> Result<WeightedComplex> {
        let (complex, weights) = link_weight(&self.complex, &self.weights, tau)?;
        Ok(WeightedComplex { complex, weights })
    }
}
