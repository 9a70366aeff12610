//! Weighted simplicial complexes, their cochain Laplacians, and numerical
//! checks of local-to-global spectral bounds (Garland's method, trickle-down,
//! partite complexes).

pub mod cochain;
pub mod complex;
pub mod document;
pub mod error;
pub mod generators;
pub mod harness;
pub mod partition;
pub mod simplex;
pub mod spectral;
pub mod weights;

pub use cochain::{Cochain, LinearOperator};
pub use complex::SimplicialComplex;
pub use document::{parse_complex, ComplexDocument};
pub use error::{Error, Result};
pub use harness::{HarnessConfig, TheoremId, VerificationReport};
pub use partition::Partition;
pub use simplex::{OrderedSimplex, Simplex};
pub use spectral::SpectralReport;
pub use weights::{WeightFunction, WeightedComplex};

/// Significant digits in every printed number.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`] significant digits.
pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest form of `x` after rounding to 12 significant digits; exponent
/// notation outside `[1e-4, 1e12)`.
pub fn format_number(x: f64) -> String {
    let r = round_significant(x);
    let a = r.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e12).contains(&a) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}
