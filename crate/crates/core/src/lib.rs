//! Exact computation of the linearisation matrix `L` and its Gale dual `K^t`
//! for tautological bundles on crepant resolutions of `A^3 / (Z/r)`.
//!
//! The toric pipeline runs
//! [`group`] → [`fan`] → [`bundles`] → [`surfaces`] → [`gale`]:
//! a validated crepant triangulation yields per-character support functions,
//! curve degrees, Euler characteristics on every compact exceptional surface,
//! and finally the pair `(L, K^t)` with its sign trichotomy and markings.
//! [`gale::matrix_mode`] runs the purely linear-algebraic part on any
//! user-supplied `L`.

pub mod bundles;
pub mod error;
pub mod fan;
pub mod gale;
pub mod group;
pub mod surfaces;
pub mod zmat;

use num_bigint::BigInt;

pub use error::Error;
pub use zmat::{IntMatrix, IntScalar};

/// Exact integer matrix used throughout the pipeline.
pub type ZMatrix = IntMatrix<BigInt>;
/// Machine-integer matrix for small bounded data (degrees, numerators).
pub type SmallZMatrix = IntMatrix<i64>;
/// Exact rational scalar.
pub type Rational = num_rational::Ratio<BigInt>;
