use super::trickle::require_connected_links;
use super::{descent_f, BoundCheck, HarnessConfig, TheoremId, VerificationReport};
use crate::cochain::{build_down_laplacian, build_up_laplacian, LinearOperator};
use crate::error::{Error, Result};
use crate::spectral::{link_spectra, operator_norm, spectral_report, LinkSpectra};
use crate::weights::WeightedComplex;

fn check_degree(wc: &WeightedComplex, k: isize) -> Result<()> {
    let n = wc.dim() as isize;
    if k < 0 || k > n - 1 {
        return Err(Error::DegreeOutOfRange {
            degree: k,
            min: 0,
            max: n - 1,
        });
    }
    Ok(())
}

/// Shared hypotheses: connected links and `λ > k/(k+1)` over links of `Σ(k−1)`.
fn local_bounds(
    wc: &WeightedComplex,
    k: isize,
    cfg: &HarnessConfig,
    r: &mut VerificationReport,
) -> Result<Option<LinkSpectra>> {
    if !require_connected_links(wc, r) {
        return Ok(None);
    }
    let links = link_spectra(wc, k - 1, cfg.zero_tolerance)?;
    let met = r.hypothesis(
        links.lambda > k as f64 / (k + 1) as f64,
        "λ over links of (k-1)-simplices exceeds k/(k+1)",
    );
    Ok(met.then_some(links))
}

/// Codimension-2 bounds descended to links of `(k−1)`-simplices, when the
/// trickle-down hypotheses hold.
fn descended_bounds(
    wc: &WeightedComplex,
    k: isize,
    cfg: &HarnessConfig,
) -> Result<Option<(f64, f64, f64, f64)>> {
    let n = wc.dim() as isize;
    if n < 2 {
        return Ok(None);
    }
    let base = link_spectra(wc, n - 2, cfg.zero_tolerance)?;
    if base.lambda <= (n - 1) as f64 / n as f64 {
        return Ok(None);
    }
    let l = (n - 1 - k) as usize;
    Ok(Some((
        base.lambda,
        base.kappa,
        descent_f(base.lambda, l)?,
        descent_f(base.kappa, l)?,
    )))
}

/// Garland: `Spec(Δ⁺_k)∖{0}` and `Spec(Δ⁻_{k+1})∖{0}` lie in `[(k+1)λ − k, (k+1)κ − k]`.
pub fn verify_garland_interval(
    wc: &WeightedComplex,
    k: isize,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    check_degree(wc, k)?;
    let mut r = VerificationReport::new(TheoremId::GarlandInterval, Some(k));
    let Some(links) = local_bounds(wc, k, cfg, &mut r)? else {
        return Ok(r.finish());
    };
    let tol = cfg.tolerance;
    let kf = k as f64;
    let up = spectral_report(&build_up_laplacian(wc, k)?, "up", cfg.zero_tolerance)?;
    let down = spectral_report(&build_down_laplacian(wc, k + 1)?, "down", cfg.zero_tolerance)?;
    let window = |lambda: f64, kappa: f64| ((kf + 1.0) * lambda - kf, (kf + 1.0) * kappa - kf);
    let interval = |r: &mut VerificationReport, tag: &str, lo: f64, hi: f64| {
        for (name, rep) in [("Δ⁺_k", &up), ("Δ⁻_{k+1}", &down)] {
            if let Some(min) = rep.lambda_min_positive {
                r.check(BoundCheck::at_least(format!("{tag}min nonzero Spec({name})"), min, lo, tol));
                r.check(BoundCheck::at_most(format!("{tag}max Spec({name})"), rep.kappa_max, hi, tol));
            }
        }
    };
    let (lo, hi) = window(links.lambda, links.kappa);
    interval(&mut r, "", lo, hi);

    let ker_down = spectral_report(&build_down_laplacian(wc, k)?, "down", cfg.zero_tolerance)?.zero_multiplicity;
    let dim = wc.complex().count(k);
    r.check(BoundCheck::at_most(
        "|dim Ker Δ⁺_k + dim Ker Δ⁻_k - dim C^k|",
        (up.zero_multiplicity + ker_down).abs_diff(dim) as f64,
        0.0,
        0.0,
    ));

    match descended_bounds(wc, k, cfg)? {
        Some((_, _, lambda, kappa)) => {
            let (lo, hi) = window(lambda, kappa);
            interval(&mut r, "from codimension-2 links: ", lo, hi);
        }
        None => r
            .discrepancies
            .push("codimension-2 links below (n-1)/n; end-to-end form not applicable".into()),
    }
    Ok(r.finish())
}

fn garland_operator(wc: &WeightedComplex, k: isize, lambda: f64, kappa: f64) -> Result<LinearOperator> {
    let mid = (lambda + kappa) / 2.0;
    let kf = k as f64;
    LinearOperator::combination(&[
        (1.0, &build_up_laplacian(wc, k)?),
        (mid, &build_down_laplacian(wc, k)?),
        (-(kf + 1.0) * (mid - kf / (kf + 1.0)), &LinearOperator::identity(wc, k)?),
    ])
}

/// `‖Δ⁺_k + μΔ⁻_k − (k+1)(μ − k/(k+1)) I‖ ≤ (k+1)(κ−λ)/2` with `μ = (λ+κ)/2`.
pub fn verify_garland_norm(
    wc: &WeightedComplex,
    k: isize,
    cfg: &HarnessConfig,
) -> Result<VerificationReport> {
    check_degree(wc, k)?;
    let mut r = VerificationReport::new(TheoremId::GarlandNorm, Some(k));
    let Some(links) = local_bounds(wc, k, cfg, &mut r)? else {
        return Ok(r.finish());
    };
    let tol = cfg.tolerance;
    let kf = k as f64;
    let norm = operator_norm(&garland_operator(wc, k, links.lambda, links.kappa)?)?;
    r.check(BoundCheck::at_most(
        "operator norm",
        norm,
        (kf + 1.0) * (links.kappa - links.lambda) / 2.0,
        tol,
    ));

    if let Some((base_lambda, base_kappa, lambda, kappa)) = descended_bounds(wc, k, cfg)? {
        let bound = (kf + 1.0) * (kappa - lambda) / 2.0;
        let norm = operator_norm(&garland_operator(wc, k, lambda, kappa)?)?;
        r.check(BoundCheck::at_most(
            "operator norm from descended codimension-2 bounds",
            norm,
            bound,
            tol,
        ));
        let literal = operator_norm(&garland_operator(wc, k, base_lambda, base_kappa)?)?;
        if literal > bound + tol {
            r.discrepancies.push(format!(
                "with undescended (λ, κ) in the operator the norm is {} against the bound {}",
                crate::format_number(literal),
                crate::format_number(bound)
            ));
        }
    }
    Ok(r.finish())
}
