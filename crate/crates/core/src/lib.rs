//! Exact numerical stability criteria (J-equation, generalized Monge–Ampère,
//! supercritical dHYM) on finitely presented compact Kähler manifolds.
//!
//! The kernel is written against [`scalar::Scalar`]; exact verdicts use
//! [`Rational`] and the transcendental dHYM quantities use `f64`.

pub mod arith;
pub mod cones;
pub mod dhym;
mod error;
pub mod geometry;
pub mod gma;
pub mod jstab;
pub mod scalar;
pub mod wallchamber;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
/// Exact class in a presentation's basis.
pub type Class = geometry::CohClass<Rational>;
/// Floating-point class, used for transcendental factor classes.
pub type FloatClass = geometry::CohClass<f64>;
pub type Poly = arith::UniPoly<Rational>;
pub type FloatPoly = arith::UniPoly<f64>;
pub type HomogPoly = arith::BiHomogPoly<Rational>;
pub type FloatHomogPoly = arith::BiHomogPoly<f64>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
