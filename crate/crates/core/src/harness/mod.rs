//! Numerical verification of local-to-global spectral bounds.
//!
//! Every `verify_*` function checks its hypotheses first and records them in
//! the report. A report fails either because a hypothesis is unmet or because
//! a measured quantity violates its bound by more than the tolerance; the two
//! are kept apart so callers can tell them apart.

mod garland;
mod identities;
mod partite;
mod trickle;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::spectral::{link_spectra, ZERO_TOLERANCE};
use crate::weights::WeightedComplex;

pub use garland::{verify_garland_interval, verify_garland_norm};
pub use identities::verify_structural_identities;
pub use partite::{
    partite_contraction_operator, verify_kappa_propagation, verify_partite_contraction,
    verify_partite_descent, verify_partite_symmetry, verify_partite_top_eigenspace,
};
pub use trickle::verify_trickledown;

/// Seed for the pseudo-random cochains of the identity suite.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;
pub const DEFAULT_SAMPLES: usize = 16;
/// Allowed violation of any bound.
pub const BOUND_TOLERANCE: f64 = 1e-8;
/// Residual allowed for exact eigen-relations such as `Δ⁺φ_i = ((n+1)/n) φ_i`.
pub const EIGEN_RELATION_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HarnessConfig {
    pub tolerance: f64,
    pub zero_tolerance: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for HarnessConfig {
    fn default() -> Self {
        HarnessConfig {
            tolerance: BOUND_TOLERANCE,
            zero_tolerance: ZERO_TOLERANCE,
            samples: DEFAULT_SAMPLES,
            seed: DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TheoremId {
    Trickledown,
    GarlandInterval,
    GarlandNorm,
    PartiteTopEigenspace,
    PartiteSymmetry,
    PartiteDescent,
    PartiteContraction,
    KappaPropagation,
    StructuralIdentities,
}

impl TheoremId {
    pub const ALL: [TheoremId; 9] = [
        TheoremId::Trickledown,
        TheoremId::GarlandInterval,
        TheoremId::GarlandNorm,
        TheoremId::PartiteTopEigenspace,
        TheoremId::PartiteSymmetry,
        TheoremId::PartiteDescent,
        TheoremId::PartiteContraction,
        TheoremId::KappaPropagation,
        TheoremId::StructuralIdentities,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Trickledown => "trickledown",
            TheoremId::GarlandInterval => "garland-interval",
            TheoremId::GarlandNorm => "garland-norm",
            TheoremId::PartiteTopEigenspace => "partite-top-eigenspace",
            TheoremId::PartiteSymmetry => "partite-symmetry",
            TheoremId::PartiteDescent => "partite-descent",
            TheoremId::PartiteContraction => "partite-contraction",
            TheoremId::KappaPropagation => "kappa-propagation",
            TheoremId::StructuralIdentities => "structural-identities",
        }
    }

    pub fn needs_partition(self) -> bool {
        matches!(
            self,
            TheoremId::PartiteTopEigenspace
                | TheoremId::PartiteSymmetry
                | TheoremId::PartiteDescent
                | TheoremId::PartiteContraction
        )
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::BadParams(format!("unknown theorem '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `measured ≤ bound`
    AtMost,
    /// `measured ≥ bound`
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundCheck {
    pub name: String,
    pub relation: Relation,
    pub bound: f64,
    pub measured: f64,
    /// Positive when the bound holds with room to spare.
    pub slack: f64,
    pub passed: bool,
}

impl BoundCheck {
    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64, tol: f64) -> Self {
        Self::new(name.into(), Relation::AtMost, measured, bound, tol)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64, tol: f64) -> Self {
        Self::new(name.into(), Relation::AtLeast, measured, bound, tol)
    }

    fn new(name: String, relation: Relation, measured: f64, bound: f64, tol: f64) -> Self {
        let slack = match relation {
            Relation::AtMost => bound - measured,
            Relation::AtLeast => measured - bound,
        };
        BoundCheck {
            name,
            relation,
            bound,
            measured,
            slack,
            passed: slack >= -tol,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    HypothesisNotMet,
    BoundViolated,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: TheoremId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<isize>,
    pub hypotheses_met: bool,
    pub hypotheses: Vec<String>,
    pub checks: Vec<BoundCheck>,
    pub discrepancies: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub outcome: Outcome,
}

impl VerificationReport {
    pub(crate) fn new(theorem: TheoremId, degree: Option<isize>) -> Self {
        VerificationReport {
            theorem,
            degree,
            hypotheses_met: true,
            hypotheses: Vec::new(),
            checks: Vec::new(),
            discrepancies: Vec::new(),
            seed: None,
            outcome: Outcome::Pass,
        }
    }

    pub(crate) fn hypothesis(&mut self, met: bool, note: impl Into<String>) -> bool {
        let note = note.into();
        self.hypotheses
            .push(format!("{} {note}", if met { "[met]" } else { "[unmet]" }));
        self.hypotheses_met &= met;
        met
    }

    pub(crate) fn check(&mut self, c: BoundCheck) {
        self.checks.push(c);
    }

    pub(crate) fn finish(mut self) -> Self {
        self.outcome = if !self.hypotheses_met {
            Outcome::HypothesisNotMet
        } else if self.checks.iter().all(|c| c.passed) {
            Outcome::Pass
        } else {
            Outcome::BoundViolated
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// Smallest slack over all checks.
    pub fn min_slack(&self) -> Option<f64> {
        self.checks.iter().map(|c| c.slack).reduce(f64::min)
    }
}

/// `f(x) = 2 − 1/x` iterated `l` times, in closed form
/// `((l+1)x − l)/(lx − (l−1))`.
pub fn descent_f(x: f64, l: usize) -> Result<f64> {
    let l = l as f64;
    let den = l * x - (l - 1.0);
    if den.abs() <= 1e-300 || !den.is_finite() {
        return Err(Error::PoleHit { x, l: l as usize });
    }
    Ok(((l + 1.0) * x - l) / den)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalExpansionReport {
    /// `λ > (n−1)/n` and, when given, `κ < 2`.
    pub precondition_ok: bool,
    pub links_connected: bool,
    pub measured_lambda: f64,
    pub measured_kappa: f64,
    pub one_sided: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub two_sided: Option<bool>,
}

impl LocalExpansionReport {
    pub fn holds(&self) -> bool {
        self.precondition_ok && self.one_sided && self.two_sided.unwrap_or(true)
    }
}

/// λ-local (or two-sided (λ, κ)-local) spectral expansion: connected links and
/// every codimension-2 link has spectrum inside `[λ, κ]` away from 0.
pub fn check_local_expansion(
    wc: &WeightedComplex,
    lambda: f64,
    kappa: Option<f64>,
    zero_tol: f64,
) -> Result<LocalExpansionReport> {
    let n = wc.dim();
    if n < 2 {
        return Err(Error::BadParams("local expansion needs dimension at least 2".into()));
    }
    let precondition_ok = lambda > (n as f64 - 1.0) / n as f64 && kappa.is_none_or(|k| k < 2.0);
    let links_connected = wc.complex().check_all_links_connected().all_connected;
    let (measured_lambda, measured_kappa) = if links_connected {
        let s = link_spectra(wc, n as isize - 2, zero_tol)?;
        (s.lambda, s.kappa)
    } else {
        (0.0, f64::NAN)
    };
    // Tight spectra are common, so measured values get BOUND_TOLERANCE slack.
    let one_sided = links_connected && measured_lambda >= lambda - BOUND_TOLERANCE;
    let two_sided = kappa.map(|k| one_sided && measured_kappa <= k + BOUND_TOLERANCE);
    Ok(LocalExpansionReport {
        precondition_ok,
        links_connected,
        measured_lambda,
        measured_kappa,
        one_sided,
        two_sided,
    })
}

/// Every applicable verification. Partite checks run only with a partition.
pub fn run_battery(
    wc: &WeightedComplex,
    partition: Option<&Partition>,
    cfg: &HarnessConfig,
) -> Result<Vec<VerificationReport>> {
    let mut out = Vec::new();
    for t in TheoremId::ALL {
        if t.needs_partition() && partition.is_none() {
            continue;
        }
        out.extend(run_theorem(wc, partition, t, cfg)?);
    }
    Ok(out)
}

/// One theorem, at every degree it applies to.
pub fn run_theorem(
    wc: &WeightedComplex,
    partition: Option<&Partition>,
    theorem: TheoremId,
    cfg: &HarnessConfig,
) -> Result<Vec<VerificationReport>> {
    let n = wc.dim() as isize;
    let need = || {
        partition.ok_or_else(|| Error::NotPartite("no partition given or detected".into()))
    };
    let degrees = 0..n;
    Ok(match theorem {
        TheoremId::Trickledown => vec![verify_trickledown(wc, cfg)?],
        TheoremId::GarlandInterval => degrees
            .map(|k| verify_garland_interval(wc, k, cfg))
            .collect::<Result<_>>()?,
        TheoremId::GarlandNorm => degrees
            .map(|k| verify_garland_norm(wc, k, cfg))
            .collect::<Result<_>>()?,
        TheoremId::PartiteTopEigenspace => vec![verify_partite_top_eigenspace(wc, need()?, cfg)?],
        TheoremId::PartiteSymmetry => vec![verify_partite_symmetry(wc, need()?, cfg)?],
        TheoremId::PartiteDescent => vec![verify_partite_descent(wc, need()?, cfg)?],
        TheoremId::PartiteContraction => {
            let p = need()?;
            degrees
                .map(|k| verify_partite_contraction(wc, p, k, cfg))
                .collect::<Result<_>>()?
        }
        TheoremId::KappaPropagation => vec![verify_kappa_propagation(wc, cfg)?],
        TheoremId::StructuralIdentities => vec![verify_structural_identities(wc, partition, cfg)?],
    })
}
