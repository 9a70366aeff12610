use super::{descent_f, BoundCheck, HarnessConfig, TheoremId, VerificationReport};
use crate::error::Result;
use crate::spectral::link_spectra;
use crate::weights::WeightedComplex;

/// Records whether every link of dimension at least one has a connected 1-skeleton.
pub(super) fn require_connected_links(wc: &WeightedComplex, r: &mut VerificationReport) -> bool {
    let report = wc.complex().check_all_links_connected();
    let bad: Vec<String> = report.failures().map(|l| l.tau.to_string()).collect();
    if bad.is_empty() {
        r.hypothesis(true, "every link of dimension >= 1 has a connected 1-skeleton")
    } else {
        r.hypothesis(false, format!("disconnected link 1-skeletons at {}", bad.join(", ")))
    }
}

/// Trickle-down: codimension-2 link bounds `[λ, κ]` descend through
/// `f(x) = 2 − 1/x` to every link of lower dimension.
pub fn verify_trickledown(wc: &WeightedComplex, cfg: &HarnessConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new(TheoremId::Trickledown, None);
    let n = wc.dim() as isize;
    if !r.hypothesis(n >= 2, "dimension at least 2") || !require_connected_links(wc, &mut r) {
        return Ok(r.finish());
    }
    let base = link_spectra(wc, n - 2, cfg.zero_tolerance)?;
    let threshold = (n - 1) as f64 / n as f64;
    if !r.hypothesis(
        base.lambda > threshold,
        "λ over codimension-2 links exceeds (n-1)/n",
    ) {
        return Ok(r.finish());
    }
    let tol = cfg.tolerance;
    for k in (-1..=n - 3).rev() {
        let l = (n - k - 2) as usize;
        let lo = descent_f(base.lambda, l)?;
        let hi = descent_f(base.kappa, l)?;
        let links = link_spectra(wc, k, cfg.zero_tolerance)?;
        r.check(BoundCheck::at_least(
            format!("k={k}: min λ(X_τ) >= f^{l}(λ)"),
            links.lambda,
            lo,
            tol,
        ));
        r.check(BoundCheck::at_most(
            format!("k={k}: max κ(X_τ) <= f^{l}(κ)"),
            links.kappa,
            hi,
            tol,
        ));
        r.check(BoundCheck::at_least(
            format!("k={k}: f^{l}(λ) > (k+1)/(k+2)"),
            lo,
            (k + 1) as f64 / (k + 2) as f64,
            0.0,
        ));
        r.check(BoundCheck::at_most(
            format!("k={k}: f^{l}(κ) <= (n-k)/(n-k-1)"),
            hi,
            (n - k) as f64 / (n - k - 1) as f64,
            tol,
        ));
    }
    Ok(r.finish())
}
