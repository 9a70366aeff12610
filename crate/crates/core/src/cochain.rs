//! Cochains, the weighted inner product, and the operators `d`, `δ`, the
//! Laplacians and their partite side versions, all as dense matrices in the
//! canonical basis (one coordinate per unordered simplex, sorted orientation).

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::simplex::{OrderedSimplex, Simplex};
use crate::weights::WeightedComplex;

/// A real antisymmetric form of degree `k`, stored on canonical orientations.
#[derive(Clone, Debug, PartialEq)]
pub struct Cochain {
    degree: isize,
    values: DVector<f64>,
}

impl Cochain {
    pub fn zeros(wc: &WeightedComplex, degree: isize) -> Result<Self> {
        check_degree(wc, degree, -1, wc.dim() as isize)?;
        Ok(Cochain {
            degree,
            values: DVector::zeros(wc.complex().count(degree)),
        })
    }

    pub fn from_values(wc: &WeightedComplex, degree: isize, values: Vec<f64>) -> Result<Self> {
        check_degree(wc, degree, -1, wc.dim() as isize)?;
        let expected = wc.complex().count(degree);
        if values.len() != expected {
            return Err(Error::Validation(format!(
                "{} values for {expected} simplices of degree {degree}",
                values.len()
            )));
        }
        Ok(Cochain {
            degree,
            values: DVector::from_vec(values),
        })
    }

    pub(crate) fn from_vector(degree: isize, values: DVector<f64>) -> Self {
        Cochain { degree, values }
    }

    pub fn constant(wc: &WeightedComplex, degree: isize, c: f64) -> Result<Self> {
        let mut z = Self::zeros(wc, degree)?;
        z.values.fill(c);
        Ok(z)
    }

    /// Value 1 on the canonical orientation of `s`, 0 elsewhere.
    pub fn indicator(wc: &WeightedComplex, s: &Simplex) -> Result<Self> {
        let i = wc
            .complex()
            .index_of(s)
            .ok_or_else(|| Error::SimplexNotInComplex(s.clone()))?;
        let mut z = Self::zeros(wc, s.dim())?;
        z.values[i] = 1.0;
        Ok(z)
    }

    /// Independent uniform coefficients in `[-1, 1]`.
    pub fn random<R: Rng + ?Sized>(wc: &WeightedComplex, degree: isize, rng: &mut R) -> Result<Self> {
        let mut z = Self::zeros(wc, degree)?;
        z.values.iter_mut().for_each(|v| *v = rng.gen_range(-1.0..=1.0));
        Ok(z)
    }

    pub fn degree(&self) -> isize {
        self.degree
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value on an ordered simplex: parity times the canonical coefficient.
    pub fn eval(&self, wc: &WeightedComplex, s: &OrderedSimplex) -> Result<f64> {
        let canon = s.canonical();
        if canon.dim() != self.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: canon.dim(),
            });
        }
        let i = wc
            .complex()
            .index_of(&canon)
            .ok_or(Error::SimplexNotInComplex(canon))?;
        Ok(s.parity() * self.values[i])
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        same_degree(self.degree, other.degree)?;
        Ok(Cochain::from_vector(self.degree, &self.values + &other.values))
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        same_degree(self.degree, other.degree)?;
        Ok(Cochain::from_vector(self.degree, &self.values - &other.values))
    }

    pub fn scale(&self, c: f64) -> Cochain {
        Cochain::from_vector(self.degree, &self.values * c)
    }
}

fn same_degree(a: isize, b: isize) -> Result<()> {
    if a != b {
        return Err(Error::DegreeMismatch { left: a, right: b });
    }
    Ok(())
}

fn check_degree(wc: &WeightedComplex, degree: isize, min: isize, max: isize) -> Result<()> {
    let _ = wc;
    if degree < min || degree > max {
        return Err(Error::DegreeOutOfRange { degree, min, max });
    }
    Ok(())
}

/// `⟨φ, ψ⟩ = Σ_{τ ∈ X^(k)} m(τ) φ(τ) ψ(τ)`; the sum over all `(k+1)!`
/// orderings with weight `m/(k+1)!` collapses to this.
pub fn inner_product(wc: &WeightedComplex, phi: &Cochain, psi: &Cochain) -> Result<f64> {
    same_degree(phi.degree, psi.degree)?;
    let m = wc.weights().level(phi.degree);
    Ok(m.iter()
        .zip(phi.values.iter().zip(psi.values.iter()))
        .map(|(w, (a, b))| w * a * b)
        .sum())
}

pub fn norm_sq(wc: &WeightedComplex, phi: &Cochain) -> f64 {
    inner_product(wc, phi, phi).expect("same degree")
}

/// A linear map between cochain spaces, with the weights of both inner products.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearOperator {
    domain: isize,
    codomain: isize,
    matrix: DMatrix<f64>,
    domain_weights: DVector<f64>,
    codomain_weights: DVector<f64>,
}

impl LinearOperator {
    pub fn new(
        wc: &WeightedComplex,
        domain: isize,
        codomain: isize,
        matrix: DMatrix<f64>,
    ) -> Result<Self> {
        let n = wc.dim() as isize;
        check_degree(wc, domain, -1, n)?;
        check_degree(wc, codomain, -1, n)?;
        let x = wc.complex();
        if matrix.nrows() != x.count(codomain) || matrix.ncols() != x.count(domain) {
            return Err(Error::Validation(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                x.count(codomain),
                x.count(domain)
            )));
        }
        Ok(LinearOperator {
            domain,
            codomain,
            matrix,
            domain_weights: DVector::from_column_slice(wc.weights().level(domain)),
            codomain_weights: DVector::from_column_slice(wc.weights().level(codomain)),
        })
    }

    pub fn identity(wc: &WeightedComplex, k: isize) -> Result<Self> {
        let size = wc.complex().count(k);
        Self::new(wc, k, k, DMatrix::identity(size, size))
    }

    pub fn zero(wc: &WeightedComplex, domain: isize, codomain: isize) -> Result<Self> {
        let x = wc.complex();
        Self::new(
            wc,
            domain,
            codomain,
            DMatrix::zeros(x.count(codomain), x.count(domain)),
        )
    }

    pub fn domain(&self) -> isize {
        self.domain
    }

    pub fn codomain(&self) -> isize {
        self.codomain
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn domain_weights(&self) -> &DVector<f64> {
        &self.domain_weights
    }

    pub fn codomain_weights(&self) -> &DVector<f64> {
        &self.codomain_weights
    }

    pub fn apply(&self, phi: &Cochain) -> Result<Cochain> {
        same_degree(self.domain, phi.degree)?;
        Ok(Cochain::from_vector(self.codomain, &self.matrix * &phi.values))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOperator) -> Result<LinearOperator> {
        same_degree(self.domain, inner.codomain)?;
        Ok(LinearOperator {
            domain: inner.domain,
            codomain: self.codomain,
            matrix: &self.matrix * &inner.matrix,
            domain_weights: inner.domain_weights.clone(),
            codomain_weights: self.codomain_weights.clone(),
        })
    }

    pub fn add(&self, other: &LinearOperator) -> Result<LinearOperator> {
        same_degree(self.domain, other.domain)?;
        same_degree(self.codomain, other.codomain)?;
        Ok(LinearOperator {
            matrix: &self.matrix + &other.matrix,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: f64) -> LinearOperator {
        LinearOperator {
            matrix: &self.matrix * c,
            ..self.clone()
        }
    }

    /// `Σ cᵢ Aᵢ` over operators with a common domain and codomain.
    pub fn combination(terms: &[(f64, &LinearOperator)]) -> Result<LinearOperator> {
        let (c0, first) = terms.first().ok_or(Error::EmptyInput)?;
        let mut acc = first.scale(*c0);
        for (c, op) in &terms[1..] {
            acc = acc.add(&op.scale(*c))?;
        }
        Ok(acc)
    }

    /// Adjoint with respect to the weighted inner products: `W_dom⁻¹ Aᵀ W_cod`.
    pub fn adjoint(&self) -> LinearOperator {
        let mut m = self.matrix.transpose();
        for (i, mut row) in m.row_iter_mut().enumerate() {
            row /= self.domain_weights[i];
        }
        for (j, mut col) in m.column_iter_mut().enumerate() {
            col *= self.codomain_weights[j];
        }
        LinearOperator {
            domain: self.codomain,
            codomain: self.domain,
            matrix: m,
            domain_weights: self.codomain_weights.clone(),
            codomain_weights: self.domain_weights.clone(),
        }
    }
}

/// `(d_k φ)(v_0..v_{k+1}) = Σ_i (-1)^i φ(v_0..v̂_i..v_{k+1})`, for `-1 ≤ k ≤ n-1`.
pub fn build_d(wc: &WeightedComplex, k: isize) -> Result<LinearOperator> {
    side_filtered_d(wc, k, |_| true)
}

fn side_filtered_d(
    wc: &WeightedComplex,
    k: isize,
    keep: impl Fn(usize) -> bool,
) -> Result<LinearOperator> {
    check_degree(wc, k, -1, wc.dim() as isize - 1)?;
    let x = wc.complex();
    let mut m = DMatrix::zeros(x.count(k + 1), x.count(k));
    for (r, sigma) in x.simplices(k + 1).iter().enumerate() {
        for (i, &v) in sigma.vertices().iter().enumerate() {
            if !keep(v) {
                continue;
            }
            let face = sigma.facet_without(i);
            let c = x.index_of(&face).expect("faces are closed");
            m[(r, c)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        }
    }
    LinearOperator::new(wc, k, k + 1, m)
}

/// `δ_k φ(τ) = Σ_{v : vτ ∈ Σ(k+1)} (m(vτ)/m(τ)) φ(vτ)`, for `-1 ≤ k ≤ n-1`.
pub fn build_delta(wc: &WeightedComplex, k: isize) -> Result<LinearOperator> {
    side_filtered_delta(wc, k, |_| true)
}

fn side_filtered_delta(
    wc: &WeightedComplex,
    k: isize,
    keep: impl Fn(usize) -> bool,
) -> Result<LinearOperator> {
    check_degree(wc, k, -1, wc.dim() as isize - 1)?;
    let x = wc.complex();
    let w = wc.weights();
    let mut m = DMatrix::zeros(x.count(k), x.count(k + 1));
    for (r, tau) in x.simplices(k).iter().enumerate() {
        let tau_ordered = OrderedSimplex::from(tau);
        for &c in x.cofaces(k, r) {
            let sigma = &x.simplices(k + 1)[c];
            let v = sigma.difference(tau).vertices()[0];
            if !keep(v) {
                continue;
            }
            let v_tau = OrderedSimplex::new(vec![v])?.concat(&tau_ordered)?;
            m[(r, c)] = w.get(k + 1, c) / w.get(k, r) * v_tau.parity();
        }
    }
    LinearOperator::new(wc, k + 1, k, m)
}

/// `Δ⁺_k = δ_k d_k`, for `-1 ≤ k ≤ n-1`.
pub fn build_up_laplacian(wc: &WeightedComplex, k: isize) -> Result<LinearOperator> {
    build_delta(wc, k)?.compose(&build_d(wc, k)?)
}

/// `Δ⁻_k = d_{k-1} δ_{k-1}`, for `0 ≤ k ≤ n`.
pub fn build_down_laplacian(wc: &WeightedComplex, k: isize) -> Result<LinearOperator> {
    check_degree(wc, k, 0, wc.dim() as isize)?;
    build_d(wc, k - 1)?.compose(&build_delta(wc, k - 1)?)
}

/// `Δ_k = Δ⁺_k + Δ⁻_k`, for `0 ≤ k ≤ n` (`Δ⁺_n = 0`).
pub fn build_full_laplacian(wc: &WeightedComplex, k: isize) -> Result<LinearOperator> {
    let down = build_down_laplacian(wc, k)?;
    if k == wc.dim() as isize {
        return Ok(down);
    }
    build_up_laplacian(wc, k)?.add(&down)
}

fn checked_partition(wc: &WeightedComplex, partition: &Partition) -> Result<()> {
    partition.validate(wc.complex())
}

/// `d_(k,j)`: only the terms deleting the vertex on side `j`.
pub fn build_side_differential(
    wc: &WeightedComplex,
    partition: &Partition,
    k: isize,
    side: usize,
) -> Result<LinearOperator> {
    checked_partition(wc, partition)?;
    side_filtered_d(wc, k, |v| partition.side(v) == Some(side))
}

/// `δ_(k,j) φ(τ) = Σ_{v ∈ S_j} (m(vτ)/m(τ)) φ(vτ)`.
pub fn build_side_codifferential(
    wc: &WeightedComplex,
    partition: &Partition,
    k: isize,
    side: usize,
) -> Result<LinearOperator> {
    checked_partition(wc, partition)?;
    side_filtered_delta(wc, k, |v| partition.side(v) == Some(side))
}

/// `Δ⁻_(k,j) = d_(k-1,j) δ_(k-1,j)`, for `0 ≤ k ≤ n`.
pub fn build_side_down_laplacian(
    wc: &WeightedComplex,
    partition: &Partition,
    k: isize,
    side: usize,
) -> Result<LinearOperator> {
    check_degree(wc, k, 0, wc.dim() as isize)?;
    build_side_differential(wc, partition, k - 1, side)?
        .compose(&build_side_codifferential(wc, partition, k - 1, side)?)
}

/// `Σ_j Δ⁻_(k,j)` over every label of `partition`.
pub fn build_side_down_sum(
    wc: &WeightedComplex,
    partition: &Partition,
    k: isize,
) -> Result<LinearOperator> {
    let mut acc = LinearOperator::zero(wc, k, k)?;
    for j in partition.labels() {
        acc = acc.add(&build_side_down_laplacian(wc, partition, k, j)?)?;
    }
    Ok(acc)
}

/// `φ_τ(σ) = φ(τσ)` on the link of `tau`, of degree `k - dim τ - 1`.
///
/// `link` must be the weighted link of `tau` (see [`WeightedComplex::link`]).
pub fn localize(
    wc: &WeightedComplex,
    link: &WeightedComplex,
    phi: &Cochain,
    tau: &OrderedSimplex,
) -> Result<Cochain> {
    let canon = tau.canonical();
    if !wc.complex().contains(&canon) {
        return Err(Error::SimplexNotInComplex(canon));
    }
    let j = tau.dim();
    if j > phi.degree {
        return Err(Error::DegreeOutOfRange {
            degree: phi.degree,
            min: j,
            max: wc.dim() as isize,
        });
    }
    let degree = phi.degree - j - 1;
    let values = link
        .complex()
        .simplices(degree)
        .iter()
        .map(|sigma| phi.eval(wc, &tau.concat(&OrderedSimplex::from(sigma))?))
        .collect::<Result<Vec<f64>>>()?;
    Cochain::from_values(link, degree, values)
}

/// Builds the link of `tau` and localizes `phi` to it.
pub fn localize_at(
    wc: &WeightedComplex,
    phi: &Cochain,
    tau: &OrderedSimplex,
) -> Result<(WeightedComplex, Cochain)> {
    let link = wc.link(&tau.canonical())?;
    let local = localize(wc, &link, phi, tau)?;
    Ok((link, local))
}

/// `φ^τ(σ) = φ(σ)` for the same-degree simplices of the link of `tau`.
pub fn restrict(
    wc: &WeightedComplex,
    link: &WeightedComplex,
    phi: &Cochain,
    tau: &Simplex,
) -> Result<Cochain> {
    if !wc.complex().contains(tau) {
        return Err(Error::SimplexNotInComplex(tau.clone()));
    }
    if phi.degree + tau.dim() + 1 > wc.dim() as isize {
        return Err(Error::DegreeTooHigh {
            degree: phi.degree,
            link_dim: tau.dim(),
            dim: wc.dim(),
        });
    }
    let x = wc.complex();
    let values = link
        .complex()
        .simplices(phi.degree)
        .iter()
        .map(|s| {
            x.index_of(s)
                .map(|i| phi.values[i])
                .ok_or_else(|| Error::SimplexNotInComplex(s.clone()))
        })
        .collect::<Result<Vec<f64>>>()?;
    Cochain::from_values(link, phi.degree, values)
}

/// Indicator of side `j` as a 0-cochain.
pub fn side_indicator(wc: &WeightedComplex, partition: &Partition, side: usize) -> Result<Cochain> {
    let values = wc
        .complex()
        .simplices(0)
        .iter()
        .map(|v| if partition.side(v.vertices()[0]) == Some(side) { 1.0 } else { 0.0 })
        .collect();
    Cochain::from_values(wc, 0, values)
}

/// Projection onto the orthogonal complement of the side indicators:
/// `φ − (n+1) Σ_j Δ⁻_(0,j) φ`.
pub fn nontrivial_projection(
    wc: &WeightedComplex,
    partition: &Partition,
    phi: &Cochain,
) -> Result<Cochain> {
    same_degree(0, phi.degree)?;
    let sum = build_side_down_sum(wc, partition, 0)?;
    let n1 = (wc.dim() + 1) as f64;
    phi.sub(&sum.apply(phi)?.scale(n1))
}

/// `φ_i(u) = −n φ(u)` on side `i`, `φ(u)` elsewhere.
pub fn side_flip(
    wc: &WeightedComplex,
    partition: &Partition,
    phi: &Cochain,
    side: usize,
) -> Result<Cochain> {
    same_degree(0, phi.degree)?;
    checked_partition(wc, partition)?;
    let n = wc.dim() as f64;
    let values = wc
        .complex()
        .simplices(0)
        .iter()
        .zip(phi.values.iter())
        .map(|(v, &a)| {
            if partition.side(v.vertices()[0]) == Some(side) {
                -n * a
            } else {
                a
            }
        })
        .collect();
    Cochain::from_values(wc, 0, values)
}
