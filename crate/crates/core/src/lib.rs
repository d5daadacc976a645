//! Projective model of the group of direct isometries of 3-space, its
//! boundary at infinity, and the bond calculus built on top of it for
//! analysing self-motions of pentapods and hexapods.
//!
//! The geometric core is generic over a scalar backend. The exact backend
//! works in the Gaussian rationals and certifies identities; the float
//! backend works in complex doubles and drives searches and normal-form
//! reduction. Concrete aliases for both instantiations live at the crate
//! root.

pub mod analyze;
pub mod bonds;
pub mod boundary;
pub mod error;
pub mod geom;
pub mod json;
pub mod pod;
pub mod poly;
pub mod rigid;
pub mod scalar;
pub mod variety;

pub use error::Error;
pub use scalar::{ComplexApprox, GaussianRational, Rational, RealScalar, Ring, Scalar, TolerancePolicy};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

/// Points of the projective model with exact Gaussian-rational coordinates.
pub type ExactPoint = variety::IsometryPoint<GaussianRational>;
/// Points of the projective model with complex floating-point coordinates.
pub type FloatPoint = variety::IsometryPoint<ComplexApprox>;
/// Direct isometries with rational entries.
pub type ExactIsometry = rigid::Isometry<Rational>;
/// Direct isometries with floating-point entries.
pub type FloatIsometry = rigid::Isometry<f64>;
/// Pods with rational leg data.
pub type ExactPod = pod::Pod<Rational>;
/// Pods with floating-point leg data.
pub type FloatPod = pod::Pod<f64>;
/// Bonds carried by exact boundary points.
pub type ExactBond = bonds::Bond<GaussianRational>;
/// Bonds carried by floating-point boundary points.
pub type FloatBond = bonds::Bond<ComplexApprox>;
