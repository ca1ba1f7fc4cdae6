pub mod algebraic;
pub mod characterize;
pub mod decimal;
pub mod dyadic;
pub mod error;
pub mod factor;
pub mod field;
pub mod heights;
pub mod interval;
pub mod intpoly;
pub mod modp;
pub mod pisot;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod serial;
pub mod sml;
pub mod structure;
pub mod trajectory;

pub use error::{Error, Result};
pub use poly::Poly;

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;
/// Polynomial with arbitrary-precision integer coefficients.
pub type IntPolynomial = Poly<num_bigint::BigInt>;
/// Polynomial with exact rational coefficients.
pub type RatPolynomial = Poly<Rational>;
