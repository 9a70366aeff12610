use thiserror::Error;

use crate::simplex::Simplex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("no facets given")]
    EmptyInput,
    #[error("facets have mixed sizes: expected {expected} vertices, found {found}")]
    MixedDimension { expected: usize, found: usize },
    #[error("vertex {0} appears twice in one simplex")]
    DuplicateVertex(usize),
    #[error("simplex {0} is not in the complex")]
    SimplexNotInComplex(Simplex),
    #[error("complex is not gallery connected")]
    NotGalleryConnected,
    #[error("complex is not partite: {0}")]
    NotPartite(String),
    #[error("weight {value} on {simplex} is not strictly positive")]
    NonPositiveWeight { simplex: Simplex, value: f64 },
    #[error("no weight given for facet {0}")]
    MissingFacet(Simplex),
    #[error("weight function is not balanced ({0} violations)")]
    Unbalanced(usize),
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: isize, right: isize },
    #[error("degree {degree} out of range [{min}, {max}]")]
    DegreeOutOfRange { degree: isize, min: isize, max: isize },
    #[error("degree {degree} too high for restriction to the link of a {link_dim}-simplex in dimension {dim}")]
    DegreeTooHigh { degree: isize, link_dim: isize, dim: usize },
    #[error("operator is not self-adjoint (asymmetry {0:e})")]
    NotSelfAdjoint(f64),
    #[error("1-skeleton of the link of {0} is disconnected")]
    DisconnectedLink(Simplex),
    #[error("descent function pole at x = {x}, l = {l}")]
    PoleHit { x: f64, l: usize },
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error("random complex rejected: {0}")]
    Rejected(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Validation(String),
}
