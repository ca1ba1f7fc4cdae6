//! Scalar traits the generic polynomial code is written against.
//!
//! Everything in [`crate::poly`] is parameterised by a coefficient type that
//! satisfies [`Ring`] (or [`Field`] for division with remainder). The exact
//! layers instantiate it with `BigInt` and `BigRational`; the floating-point
//! root finder instantiates it with `f64`.

use num_traits::{One, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A commutative ring with identity.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring + Div<Output = Self> {}

impl<T> Field for T where T: Ring + Div<Output = T> {}

/// Embedding of small integers, used for derivatives and binomial
/// coefficients in generic code.
pub trait FromSmallInt {
    fn from_i64(v: i64) -> Self;
}

macro_rules! impl_from_small_float {
    ($($t:ty),*) => {$(
        impl FromSmallInt for $t {
            fn from_i64(v: i64) -> Self { v as $t }
        }
    )*};
}

impl_from_small_float!(f32, f64);

impl FromSmallInt for num_bigint::BigInt {
    fn from_i64(v: i64) -> Self {
        num_bigint::BigInt::from(v)
    }
}

impl FromSmallInt for num_rational::BigRational {
    fn from_i64(v: i64) -> Self {
        num_rational::BigRational::from_integer(num_bigint::BigInt::from(v))
    }
}

impl<T: FromSmallInt + Clone + num_traits::Num> FromSmallInt for num_complex::Complex<T> {
    fn from_i64(v: i64) -> Self {
        num_complex::Complex::new(T::from_i64(v), T::zero())
    }
}

/// Order of two rationals by cross-multiplication. `Ord` on `Ratio`
/// recurses along a continued fraction expansion, which exhausts the stack
/// on enclosure endpoints with tens of thousands of bits.
pub fn cmp_rational(a: &crate::Rational, b: &crate::Rational) -> std::cmp::Ordering {
    (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
}
