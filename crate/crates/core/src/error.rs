//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Every polynomial in a family handed to a gcd is zero.
    #[error("zero family")]
    ZeroFamily,
    /// All seventeen coordinates of a product vanish; the projective product
    /// is not defined there.
    #[error("undefined product")]
    UndefinedProduct,
    /// All seventeen coordinates are zero; no projective point.
    #[error("zero point")]
    ZeroPoint,
    /// An operation restricted to the boundary received a point with h != 0.
    #[error("not a boundary point")]
    NotBoundary,
    /// The defining equations of the model are violated beyond tolerance.
    #[error("not on the variety (listed generators)")]
    NotOnVariety,
    /// A matrix expected to have rank one does not.
    #[error("not rank one")]
    NotRankOne,
    /// A matrix expected to be nonzero is zero.
    #[error("zero matrix")]
    ZeroMatrix,
    /// A vector expected to be isotropic and nonzero is not.
    #[error("not on absolute conic")]
    NotOnConic,
    /// The boundary class carries no left/right vector pair.
    #[error("no left/right vector pair")]
    NoLeftRight,
    /// The boundary class carries no collinearity direction.
    #[error("not a collinearity point")]
    NotCollinearity,
    /// The vertex admits no normal-form moduli.
    #[error("vertex has no moduli")]
    VertexNoModuli,
    /// A curve parametrization degenerates (identically zero denominator or
    /// value vector that never becomes nonzero under differentiation).
    #[error("degenerate parametrization")]
    DegenerateParametrization,
    /// Paired sequences have different lengths.
    #[error("length mismatch: {0}")]
    LengthMismatch(&'static str),
    /// A floating-point value is NaN or infinite.
    #[error("non-finite value")]
    NonFinite,
    /// A parameter that must be strictly positive is not.
    #[error("parameter must be positive")]
    NonPositiveParameter,
    /// A planar fractional-linear map with ad - bc = 0.
    #[error("degenerate planar map")]
    DegenerateMobius,
    /// A vector that must be a unit vector is not.
    #[error("direction must be a unit vector")]
    NotUnit,
    /// Division by zero in exact arithmetic.
    #[error("division by zero")]
    DivisionByZero,
    /// Tolerances must be non-negative finite numbers.
    #[error("invalid tolerance")]
    InvalidTolerance,
    /// Input text could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
    /// A structurally invalid argument.
    #[error("invalid argument: {0}")]
    Invalid(String),
}
