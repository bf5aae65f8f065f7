use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("weight matrix not of full rank")]
    NotFullRank,
    #[error("zero vector has no primitive representative")]
    ZeroVector,
    #[error("vector is not primitive (coordinate gcd {0})")]
    NotPrimitive(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polytope is unbounded")]
    Unbounded,
    #[error("polytope is empty")]
    Empty,
    #[error("cone is not pointed")]
    NotPointed,
    #[error("projection is not a surjection onto a saturated lattice")]
    NotSurjective,
    #[error("not fully definite at this linearization")]
    NotFullyDefinite,
    #[error("fan has {rays} rays, above the isomorphism search cap of {cap}")]
    TooManyRays { rays: usize, cap: usize },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("indeterminate: point lies in the base locus")]
    Indeterminate,
    #[error("unsupported map shape: {0}")]
    UnsupportedShape(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid fan: {0}")]
    InvalidFan(String),
}
