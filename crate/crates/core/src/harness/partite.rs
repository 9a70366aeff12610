use super::trickle::require_connected_links;
use super::{descent_f, BoundCheck, HarnessConfig, TheoremId, VerificationReport};
use crate::cochain::{
    build_down_laplacian, build_side_down_sum, build_up_laplacian, norm_sq, restrict,
    side_indicator, Cochain, LinearOperator,
};
use crate::error::{Error, Result};
use crate::format_number as num;
use crate::partition::Partition;
use crate::spectral::{eigen_decompose, link_report, link_spectra, operator_norm, spectral_report};
use crate::weights::WeightedComplex;

/// Top eigenvalue `(d+1)/d` of the 1-skeleton Laplacian of a `d`-dimensional partite complex.
fn top_value(d: isize) -> f64 {
    (d + 1) as f64 / d as f64
}

fn partite_hypotheses(
    wc: &WeightedComplex,
    partition: &Partition,
    r: &mut VerificationReport,
) -> Result<bool> {
    partition.validate(wc.complex())?;
    let sides = partition.labels().len();
    let met = r.hypothesis(
        sides == wc.dim() + 1,
        format!("{sides} sides for dimension {}", wc.dim()),
    );
    Ok(met && require_connected_links(wc, r))
}

fn weighted_norm(wc: &WeightedComplex, phi: &Cochain) -> f64 {
    norm_sq(wc, phi).sqrt()
}

/// `φ_i = n` on side `i`, `−1` elsewhere.
fn side_eigenfunction(wc: &WeightedComplex, partition: &Partition, side: usize) -> Result<Cochain> {
    let n = wc.dim() as f64;
    let chi = side_indicator(wc, partition, side)?;
    Ok(Cochain::from_vector(0, chi.values().map(|c| c * (n + 1.0) - 1.0)))
}

/// The functions `φ_i` span the eigenspace of `(n+1)/n`, which has dimension `n`.
pub fn verify_partite_top_eigenspace(
    wc: &WeightedComplex,
    partition: &Partition,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(TheoremId::PartiteTopEigenspace, None);
    if !partite_hypotheses(wc, partition, &mut r)? {
        return Ok(r.finish());
    }
    let n = wc.dim() as isize;
    let top = top_value(n);
    let up = build_up_laplacian(wc, 0)?;
    let mut eig_residual: f64 = 0.0;
    let mut indicator_residual: f64 = 0.0;
    for side in partition.labels() {
        let phi = side_eigenfunction(wc, partition, side)?;
        let res = up.apply(&phi)?.sub(&phi.scale(top))?;
        eig_residual = eig_residual.max(weighted_norm(wc, &res) / weighted_norm(wc, &phi));
        let chi = side_indicator(wc, partition, side)?;
        let rebuilt = phi.values().map(|v| (v + 1.0) / (n + 1) as f64);
        indicator_residual = indicator_residual.max((chi.values() - rebuilt).amax());
    }
    r.check(BoundCheck::at_most(
        "max relative residual of Δ⁺φ_i = ((n+1)/n)φ_i",
        eig_residual,
        0.0,
        super::EIGEN_RELATION_TOLERANCE,
    ));
    r.check(BoundCheck::at_most(
        "max |χ_{S_i} - (φ_i + 1)/(n+1)|",
        indicator_residual,
        0.0,
        super::EIGEN_RELATION_TOLERANCE,
    ));
    let eig = eigen_decompose(&up)?;
    let multiplicity = eig.values.iter().filter(|&&v| (v - top).abs() <= cfg.tolerance).count();
    r.check(BoundCheck::at_most(
        "|dim of the (n+1)/n eigenspace - n|",
        multiplicity.abs_diff(n as usize) as f64,
        0.0,
        0.0,
    ));
    let above = eig.values.iter().filter(|&&v| v > top + cfg.tolerance).count();
    r.check(BoundCheck::at_most("eigenvalues above (n+1)/n", above as f64, 0.0, 0.0));
    Ok(r.finish())
}

/// `1 + (1−λ)/n ≤ κ ≤ 1 + n(1−λ)` for the non-trivial spectrum of `Δ⁺_0`.
pub fn verify_partite_symmetry(
    wc: &WeightedComplex,
    partition: &Partition,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(TheoremId::PartiteSymmetry, None);
    if !partite_hypotheses(wc, partition, &mut r)? {
        return Ok(r.finish());
    }
    if !r.hypothesis(wc.complex().facets().len() > 1, "more than one facet") {
        return Ok(r.finish());
    }
    let n = wc.dim() as f64;
    let top = top_value(wc.dim() as isize);
    let rep = spectral_report(&build_up_laplacian(wc, 0)?, "up", cfg.zero_tolerance)?
        .with_partite_top(top, cfg.tolerance);
    let (Some(lambda), Some(kappa)) = (rep.lambda_min_positive, rep.kappa_nontrivial) else {
        r.discrepancies.push("non-trivial spectrum is empty".into());
        return Ok(r.finish());
    };
    let tol = cfg.tolerance;
    r.check(BoundCheck::at_least("κ(X) >= 1 + (1-λ(X))/n", kappa, 1.0 + (1.0 - lambda) / n, tol));
    r.check(BoundCheck::at_most("κ(X) <= 1 + n(1-λ(X))", kappa, 1.0 + n * (1.0 - lambda), tol));
    let lo = 1.0 - (1.0 - lambda) / n;
    let hi = 1.0 - n * (1.0 - lambda);
    let holds = lo - tol <= kappa && kappa <= hi + tol;
    r.discrepancies.push(format!(
        "the variant 1 - (1-λ)/n <= κ <= 1 - n(1-λ) gives [{}, {}] for κ = {}: {}",
        num(lo),
        num(hi),
        num(kappa),
        if holds { "holds" } else { "violated" }
    ));
    Ok(r.finish())
}

/// Non-trivial link spectra lie in `[f^{n−k−2}(λ), 1 + (n−k)(1 − f^{n−k−2}(λ))]`
/// and every link attains its top value `(n−k)/(n−k−1)`.
pub fn verify_partite_descent(
    wc: &WeightedComplex,
    partition: &Partition,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(TheoremId::PartiteDescent, None);
    let n = wc.dim() as isize;
    if !partite_hypotheses(wc, partition, &mut r)? || !r.hypothesis(n >= 2, "dimension at least 2") {
        return Ok(r.finish());
    }
    let base = link_spectra(wc, n - 2, cfg.zero_tolerance)?;
    if !r.hypothesis(
        base.lambda > (n - 1) as f64 / n as f64,
        "λ over codimension-2 links exceeds (n-1)/n",
    ) {
        return Ok(r.finish());
    }
    let tol = cfg.tolerance;
    for k in (-1..=n - 3).rev() {
        let l = (n - k - 2) as usize;
        let f = descent_f(base.lambda, l)?;
        let hi = 1.0 + (n - k) as f64 * (1.0 - f);
        let hi_variant = 1.0 - (n - k) as f64 * (1.0 - f);
        let top = top_value(n - k - 1);
        let mut min_nt = f64::INFINITY;
        let mut max_nt = f64::NEG_INFINITY;
        let mut top_gap: f64 = 0.0;
        for tau in wc.complex().simplices(k) {
            let rep = link_report(wc, tau, cfg.zero_tolerance)?;
            for &v in rep.nonzero().iter().filter(|&&v| (v - top).abs() > tol) {
                min_nt = min_nt.min(v);
                max_nt = max_nt.max(v);
            }
            top_gap = top_gap.max((rep.kappa_max - top).abs());
        }
        r.check(BoundCheck::at_most(
            format!("k={k}: max |κ(X_τ) - (n-k)/(n-k-1)|"),
            top_gap,
            0.0,
            tol,
        ));
        if min_nt > max_nt {
            continue;
        }
        r.check(BoundCheck::at_least(
            format!("k={k}: min non-trivial eigenvalue >= f^{l}(λ)"),
            min_nt,
            f,
            tol,
        ));
        r.check(BoundCheck::at_most(
            format!("k={k}: max non-trivial eigenvalue <= 1 + (n-k)(1 - f^{l}(λ))"),
            max_nt,
            hi,
            tol,
        ));
        r.discrepancies.push(format!(
            "k={k}: variant upper bound 1 - (n-k)(1 - f^{l}(λ)) = {} against {}; measured {}: {}",
            num(hi_variant),
            num(hi),
            num(max_nt),
            if max_nt <= hi_variant + tol { "holds" } else { "violated" }
        ));
    }
    Ok(r.finish())
}

/// Coefficient on `Σ_j Δ⁻_(k,j)` in the partite contraction operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SideTerm {
    /// `(n+1−k)²/(n−k) − (n+1−k)(λ+κ)/2`; matches `‖Δ⁻_(0,j)φ‖² = <Δ⁻φ,φ>/(n+1−k)`.
    Linear,
    /// `(n+1−k)²/(n−k) − (n+1−k)²(λ+κ)/2`, kept for comparison.
    Squared,
}

/// `Δ⁺_k + ((n+1−k)/(n−k))Δ⁻_k + (k − (k+1)μ)I − c·Σ_j Δ⁻_(k,j)` with `μ = (λ+κ)/2`.
pub fn partite_contraction_operator(
    wc: &WeightedComplex,
    partition: &Partition,
    k: isize,
    lambda: f64,
    kappa: f64,
    side_term: SideTerm,
) -> Result<LinearOperator> {
    let n = wc.dim() as isize;
    let c = (n + 1 - k) as f64;
    let m = (n - k) as f64;
    let mid = (lambda + kappa) / 2.0;
    let kf = k as f64;
    let side = match side_term {
        SideTerm::Linear => c * c / m - c * mid,
        SideTerm::Squared => c * c / m - c * c * mid,
    };
    LinearOperator::combination(&[
        (1.0, &build_up_laplacian(wc, k)?),
        (c / m, &build_down_laplacian(wc, k)?),
        (kf - (kf + 1.0) * mid, &LinearOperator::identity(wc, k)?),
        (-side, &build_side_down_sum(wc, partition, k)?),
    ])
}

/// Partite analogue of the Garland norm bound, with `(λ, κ)` taken over the
/// non-trivial spectra of links of `(k−1)`-simplices.
pub fn verify_partite_contraction(
    wc: &WeightedComplex,
    partition: &Partition,
    k: isize,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    let n = wc.dim() as isize;
    if k < 0 || k > n - 1 {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            min: 0,
            max: n - 1,
        });
    }
    let mut r = VerificationReport::new(TheoremId::PartiteContraction, Some(k));
    if !partite_hypotheses(wc, partition, &mut r)? {
        return Ok(r.finish());
    }
    let tol = cfg.tolerance;
    let top = top_value(n - k);
    let mut lambda = f64::INFINITY;
    let mut kappa = f64::NEG_INFINITY;
    for tau in wc.complex().simplices(k - 1) {
        let rep = link_report(wc, tau, cfg.zero_tolerance)?;
        for &v in rep.nonzero().iter().filter(|&&v| v < top - tol) {
            lambda = lambda.min(v);
            kappa = kappa.max(v);
        }
    }
    if lambda > kappa {
        // every link is a single simplex: the non-trivial spaces are zero
        r.discrepancies.push("non-trivial link spectra are empty; using λ = κ = 1".into());
        lambda = 1.0;
        kappa = 1.0;
    }
    if !r.hypothesis(
        lambda > k as f64 / (k + 1) as f64,
        "non-trivial λ over links of (k-1)-simplices exceeds k/(k+1)",
    ) {
        return Ok(r.finish());
    }
    let kf = k as f64;
    let bound = (kf + 1.0) * (kappa - lambda) / 2.0;
    let op = partite_contraction_operator(wc, partition, k, lambda, kappa, SideTerm::Linear)?;
    r.check(BoundCheck::at_most("operator norm", operator_norm(&op)?, bound, tol));
    let literal = partite_contraction_operator(wc, partition, k, lambda, kappa, SideTerm::Squared)?;
    let literal = operator_norm(&literal)?;
    r.discrepancies.push(format!(
        "with side coefficient (n+1-k)^2/(n-k) - (n+1-k)^2(λ+κ)/2 the norm is {} against the bound {}: {}",
        num(literal),
        num(bound),
        if literal <= bound + tol { "holds" } else { "violated" }
    ));

    if n >= 2 {
        let base = link_spectra(wc, n - 2, cfg.zero_tolerance)?;
        if base.lambda > (n - 1) as f64 / n as f64 {
            let lam = descent_f(base.lambda, (n - 1 - k) as usize)?;
            let kap = 1.0 + (n - k) as f64 * (1.0 - lam);
            if kap >= lam {
                let bound = (kf + 1.0) * (n + 1 - k) as f64 * (1.0 - lam) / 2.0;
                let op = partite_contraction_operator(wc, partition, k, lam, kap, SideTerm::Linear)?;
                r.check(BoundCheck::at_most(
                    "operator norm from descended codimension-2 bounds",
                    operator_norm(&op)?,
                    bound,
                    tol,
                ));
            } else {
                r.discrepancies.push(format!(
                    "descended window is empty (λ' = {}); end-to-end form skipped",
                    num(lam)
                ));
            }
        }
    }
    Ok(r.finish())
}

/// Mean-centred restrictions of top eigenfunctions of `Δ⁺_{τ,0}` are top
/// eigenfunctions one level down, recursively to the 1-dimensional links.
pub fn verify_kappa_propagation(wc: &WeightedComplex, cfg: &HarnessConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(TheoremId::KappaPropagation, None);
    if !require_connected_links(wc, &mut r) {
        return Ok(r.finish());
    }
    let n = wc.dim() as isize;
    let mut stats = Propagation::default();
    for k in -1..=n - 3 {
        let top = top_value(n - k - 1);
        for tau in wc.complex().simplices(k) {
            let link = wc.link(tau)?;
            let eig = eigen_decompose(&build_up_laplacian(&link, 0)?)?;
            for phi in eig.eigenspace(top, cfg.tolerance) {
                stats.roots += 1;
                descend(&link, &phi, &mut stats)?;
            }
        }
    }
    if stats.roots == 0 {
        r.discrepancies.push("no link attains its top value; nothing to propagate".into());
        return Ok(r.finish());
    }
    r.check(BoundCheck::at_most(
        "max relative residual of centred restrictions at the next top value",
        stats.max_residual,
        0.0,
        cfg.tolerance,
    ));
    r.discrepancies.push(format!(
        "{} restrictions checked; uncentred restrictions have max relative residual {}",
        stats.checked,
        num(stats.max_literal)
    ));
    Ok(r.finish())
}

#[derive(Default)]
struct Propagation {
    roots: usize,
    checked: usize,
    max_residual: f64,
    max_literal: f64,
}

fn descend(link: &WeightedComplex, phi: &Cochain, stats: &mut Propagation) -> Result<()> {
    let d = link.dim() as isize;
    let next = top_value(d - 1);
    for v in link.complex().simplices(0) {
        let sub = link.link(v)?;
        let restricted = restrict(link, &sub, phi, v)?;
        let up = build_up_laplacian(&sub, 0)?;
        let centred = restricted.sub(&build_down_laplacian(&sub, 0)?.apply(&restricted)?)?;
        let size = weighted_norm(&sub, &restricted);
        if size > 0.0 {
            let res = up.apply(&restricted)?.sub(&restricted.scale(next))?;
            stats.max_literal = stats.max_literal.max(weighted_norm(&sub, &res) / size);
        }
        let centred_size = weighted_norm(&sub, &centred);
        if centred_size <= 1e-9 * size.max(f64::MIN_POSITIVE) {
            continue;
        }
        let res = up.apply(&centred)?.sub(&centred.scale(next))?;
        stats.max_residual = stats.max_residual.max(weighted_norm(&sub, &res) / centred_size);
        stats.checked += 1;
        if sub.dim() >= 2 {
            descend(&sub, &centred, stats)?;
        }
    }
    Ok(())
}
