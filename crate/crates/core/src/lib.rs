//! Exact construction, audit and measurement of integer linear forms in
//! Dirichlet L-values at `z = -1`.

pub mod arith;
pub mod audit;
pub mod bounds;
pub mod ball;
pub mod characters;
pub mod coeffs;
pub mod cyclo;
pub mod error;
pub mod forms;
pub mod linalg;
pub mod poly;
pub mod polylog;
pub mod siegel;

pub use error::{Error, Result};

/// Exact rational scalar.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer scalar.
pub type Int = num_bigint::BigInt;
/// Laurent polynomial with rational coefficients.
pub type QLaurent = poly::Laurent<Rat>;
/// Laurent polynomial with integer coefficients.
pub type ZLaurent = poly::Laurent<Int>;
