//! Exact almost-cohomology of Lie rings over finitely generated abelian
//! groups.
//!
//! Every computation is exact: integers are arbitrary precision, rational
//! work uses `BigRational`, and classical cohomology with finite
//! coefficients runs over [`Fp`]. The generic layers ([`matrix`], the
//! Hermite/Smith reductions in [`fgab`], and [`linalg`]) are parameterised
//! by scalar traits; the aliases below fix the instantiations the algebra
//! modules use.

// Index loops mirror the matrix formulas they implement.
#![allow(clippy::needless_range_loop)]

pub mod almost;
pub mod catalog;
pub mod cohom;
pub mod error;
pub mod fgab;
pub mod frame;
pub mod liering;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod phom;
pub mod scalar;
pub mod seq;

pub use error::{AlgebraError, Result};
pub use scalar::{Field, Fp, IntegerScalar};

/// Arbitrary-precision integer.
pub type Int = num_bigint::BigInt;
/// Arbitrary-precision rational.
pub type Rational = num_rational::BigRational;
pub type IntMatrix = matrix::Matrix<Int>;
pub type QMatrix = matrix::Matrix<Rational>;
pub type FpMatrix = matrix::Matrix<Fp>;
