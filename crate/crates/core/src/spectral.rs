//! Eigensolving of operators that are self-adjoint in a weighted inner product.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::cochain::{build_d, build_full_laplacian, build_up_laplacian, Cochain, LinearOperator};
use crate::error::{Error, Result};
use crate::simplex::Simplex;
use crate::weights::WeightedComplex;

/// Eigenvalues with `|μ|` below this count as zero.
pub const ZERO_TOLERANCE: f64 = 1e-8;
/// Largest entrywise asymmetry (relative to the largest entry) accepted after conjugation.
pub const SYMMETRY_TOLERANCE: f64 = 1e-8;
/// Jacobi stops once the off-diagonal Frobenius mass falls below this fraction of the total.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of a
/// symmetric matrix, by cyclic Jacobi rotations.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "square matrix required");
    let mut a = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let total = a.norm();
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    off += a[(p, q)] * a[(p, q)];
                }
            }
        }
        if off.sqrt() <= JACOBI_TOLERANCE * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// `W^{1/2} A W^{-1/2}` for an operator from a cochain space to itself.
pub fn conjugate(op: &LinearOperator) -> Result<DMatrix<f64>> {
    if op.domain() != op.codomain() {
        return Err(Error::DegreeMismatch {
            left: op.domain(),
            right: op.codomain(),
        });
    }
    let w = op.domain_weights();
    let a = op.matrix();
    Ok(DMatrix::from_fn(a.nrows(), a.ncols(), |i, j| {
        a[(i, j)] * w[i].sqrt() / w[j].sqrt()
    }))
}

/// Eigenpairs of a self-adjoint operator; eigenvectors are in the weighted
/// basis and orthonormal for the weighted inner product.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub degree: isize,
    pub values: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl EigenDecomposition {
    pub fn vector(&self, i: usize) -> Cochain {
        Cochain::from_vector(self.degree, self.vectors.column(i).into_owned())
    }

    /// Eigenvectors whose eigenvalue lies within `tol` of `mu`.
    pub fn eigenspace(&self, mu: f64, tol: f64) -> Vec<Cochain> {
        (0..self.values.len())
            .filter(|&i| (self.values[i] - mu).abs() <= tol)
            .map(|i| self.vector(i))
            .collect()
    }
}

pub fn eigen_decompose(op: &LinearOperator) -> Result<EigenDecomposition> {
    let s = conjugate(op)?;
    let scale = s.amax().max(1.0);
    let asym = (&s - s.transpose()).amax() / scale;
    if asym > SYMMETRY_TOLERANCE {
        return Err(Error::NotSelfAdjoint(asym));
    }
    let sym = (&s + s.transpose()) * 0.5;
    let (values, mut vectors) = jacobi_eigen(&sym);
    let w = op.domain_weights();
    for (i, mut row) in vectors.row_iter_mut().enumerate() {
        row /= w[i].sqrt();
    }
    Ok(EigenDecomposition {
        degree: op.domain(),
        values,
        vectors,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralReport {
    pub operator: String,
    pub degree: isize,
    pub eigenvalues: Vec<f64>,
    /// Smallest eigenvalue above the zero threshold (λ).
    pub lambda_min_positive: Option<f64>,
    /// Largest eigenvalue (κ).
    pub kappa_max: f64,
    pub zero_multiplicity: usize,
    /// Largest eigenvalue strictly below the top partite value.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_nontrivial: Option<f64>,
}

impl SpectralReport {
    pub fn from_values(operator: impl Into<String>, degree: isize, values: &[f64], zero_tol: f64) -> Self {
        let eigenvalues: Vec<f64> = values
            .iter()
            .map(|&v| if v.abs() < zero_tol { 0.0 } else { v })
            .collect();
        let zero_multiplicity = eigenvalues.iter().filter(|&&v| v == 0.0).count();
        let lambda_min_positive = eigenvalues.iter().copied().find(|&v| v > 0.0);
        let kappa_max = eigenvalues.last().copied().unwrap_or(0.0);
        SpectralReport {
            operator: operator.into(),
            degree,
            eigenvalues,
            lambda_min_positive,
            kappa_max,
            zero_multiplicity,
            kappa_nontrivial: None,
        }
    }

    /// Records the largest eigenvalue below `top - tol`.
    pub fn with_partite_top(mut self, top: f64, tol: f64) -> Self {
        self.kappa_nontrivial = self
            .eigenvalues
            .iter()
            .copied()
            .rfind(|&v| v < top - tol);
        self
    }

    /// Eigenvalues other than 0.
    pub fn nonzero(&self) -> Vec<f64> {
        self.eigenvalues.iter().copied().filter(|&v| v != 0.0).collect()
    }
}

pub fn eig_selfadjoint(op: &LinearOperator) -> Result<SpectralReport> {
    spectral_report(op, "operator", ZERO_TOLERANCE)
}

pub fn spectral_report(op: &LinearOperator, name: &str, zero_tol: f64) -> Result<SpectralReport> {
    let eig = eigen_decompose(op)?;
    Ok(SpectralReport::from_values(name, op.domain(), &eig.values, zero_tol))
}

/// Largest `|μ|` over the spectrum.
pub fn operator_norm(op: &LinearOperator) -> Result<f64> {
    let eig = eigen_decompose(op)?;
    Ok(eig.values.iter().fold(0.0, |m: f64, v| m.max(v.abs())))
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkSpectrum {
    pub tau: Simplex,
    pub report: SpectralReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct LinkSpectra {
    pub degree: isize,
    pub links: Vec<LinkSpectrum>,
    /// Minimum of λ over all links.
    pub lambda: f64,
    /// Maximum of κ over all links.
    pub kappa: f64,
}

/// `Δ⁺_{τ,0}` spectra for every `τ ∈ X^(k)`, `-1 ≤ k ≤ n-2`.
pub fn link_spectra(wc: &WeightedComplex, k: isize, zero_tol: f64) -> Result<LinkSpectra> {
    let n = wc.dim() as isize;
    if k < -1 || k > n - 2 {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            min: -1,
            max: n - 2,
        });
    }
    let mut links = Vec::new();
    let mut lambda = f64::INFINITY;
    let mut kappa = f64::NEG_INFINITY;
    for tau in wc.complex().simplices(k) {
        let report = link_report(wc, tau, zero_tol)?;
        if report.zero_multiplicity != 1 {
            return Err(Error::DisconnectedLink(tau.clone()));
        }
        lambda = lambda.min(report.lambda_min_positive.unwrap_or(0.0));
        kappa = kappa.max(report.kappa_max);
        links.push(LinkSpectrum {
            tau: tau.clone(),
            report,
        });
    }
    Ok(LinkSpectra {
        degree: k,
        links,
        lambda,
        kappa,
    })
}

/// Spectrum of `Δ⁺_{τ,0}` on the link of a single simplex.
pub fn link_report(wc: &WeightedComplex, tau: &Simplex, zero_tol: f64) -> Result<SpectralReport> {
    let link = wc.link(tau)?;
    let op = build_up_laplacian(&link, 0)?;
    spectral_report(&op, &format!("up_laplacian(link {tau}, 0)"), zero_tol)
}

/// `dim Ker Δ_k` for `0 ≤ k ≤ n`. At `k = 0` the down part is taken to be zero
/// (no augmentation), so the answer is the ordinary `b₀`.
pub fn harmonic_dimension(wc: &WeightedComplex, k: isize, zero_tol: f64) -> Result<usize> {
    let n = wc.dim() as isize;
    if k < 0 || k > n {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            min: 0,
            max: n,
        });
    }
    let op = if k == 0 {
        build_up_laplacian(wc, 0)?
    } else {
        build_full_laplacian(wc, k)?
    };
    Ok(spectral_report(&op, "laplacian", zero_tol)?.zero_multiplicity)
}

/// Betti numbers `b_0..b_n` from ranks of the coboundary matrices (SVD rank).
pub fn betti_numbers(wc: &WeightedComplex) -> Result<Vec<usize>> {
    let n = wc.dim() as isize;
    let ranks = (0..n)
        .map(|k| Ok(matrix_rank(build_d(wc, k)?.matrix())))
        .collect::<Result<Vec<usize>>>()?;
    Ok((0..=n)
        .map(|k| {
            let dim = wc.complex().count(k);
            let out = if k < n { ranks[k as usize] } else { 0 };
            let inc = if k > 0 { ranks[k as usize - 1] } else { 0 };
            dim - out - inc
        })
        .collect())
}

fn matrix_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let tol = 1e-9 * sv.max().max(1.0);
    sv.iter().filter(|&&s| s > tol).count()
}

/// Multisets of nonzero eigenvalues equal within `tol` (both sorted ascending).
pub fn nonzero_spectra_match(a: &SpectralReport, b: &SpectralReport, tol: f64) -> bool {
    let (x, y) = (a.nonzero(), b.nonzero());
    x.len() == y.len() && x.iter().zip(&y).all(|(p, q)| (p - q).abs() <= tol)
}

/// `‖Av − μv‖` for every eigenpair, in the weighted norm.
pub fn max_residual(op: &LinearOperator, eig: &EigenDecomposition) -> f64 {
    let w = op.domain_weights();
    (0..eig.values.len())
        .map(|i| {
            let v: DVector<f64> = eig.vectors.column(i).into_owned();
            let r = op.matrix() * &v - &v * eig.values[i];
            r.iter().zip(w.iter()).map(|(x, m)| m * x * x).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}
