//! Shapes of rank-2 unit lattices of quartic fields with signature (2,1).
//!
//! The crate computes logarithmic Minkowski embeddings of explicit unit
//! bases, reduces the resulting rank-2 Gram matrices into the standard
//! fundamental domain of `GL2(Z) \ H`, classifies boundary membership,
//! and runs convergence and escape-of-mass studies over parametrized
//! families of fields.
//!
//! The geometric core ([`lattice`], [`units`]) is generic over the scalar
//! type through the [`Real`] trait; `f64` serves the brute-force oracles
//! and [`BigReal`] the production precision. The aliases below fix the
//! concrete production types.

pub mod analysis;
pub mod big;
pub mod error;
pub mod families;
pub mod integer;
pub mod lattice;
pub mod output;
pub mod real;
pub mod records;
pub mod roots;
pub mod units;
pub mod verify;

pub use big::{BigComplex, BigReal, PrecisionContext};
pub use error::{Error, Result};
pub use real::Real;

/// Production scalar.
pub type Big = BigReal;
/// Gram matrix over the production scalar.
pub type Gram = lattice::Gram2<BigReal>;
/// Fundamental-domain point over the production scalar.
pub type Shape = lattice::ShapePoint<BigReal>;
/// Boundary classification over the production scalar.
pub type Boundary = lattice::BoundaryClass<BigReal>;
/// Logarithmic embedding vector over the production scalar.
pub type LogVec = units::LogVector<BigReal>;

/// f64 variants used by oracles and quick checks.
pub type GramF64 = lattice::Gram2<f64>;
pub type ShapeF64 = lattice::ShapePoint<f64>;
