//! Dense univariate polynomials over a generic coefficient ring.

use crate::scalar::{Field, FromSmallInt, Ring};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense polynomial, coefficients stored low-to-high.
///
/// The coefficient vector never carries trailing zeros, so the zero
/// polynomial is the empty vector and `degree` is `None` for it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![T::one()] }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c * x^k`.
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `x - r`.
    pub fn linear_root(r: T) -> Self {
        Poly::new(vec![-r, T::one()])
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Coefficients reversed: `x^deg p(1/x)`.
    pub fn reverse(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Poly::new(coeffs)
    }

    /// `p(-x)`.
    pub fn negate_var(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Horner evaluation into any ring `U` that the coefficients map into.
    pub fn eval_with<U>(&self, x: &U, embed: impl Fn(&T) -> U) -> U
    where
        U: Clone + Add<Output = U> + Mul<Output = U>,
        U: num_traits::Zero,
    {
        let mut acc = U::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + embed(c);
        }
        acc
    }

    pub fn eval(&self, x: &T) -> T {
        self.eval_with(x, |c| c.clone())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Composition `self(other(x))`.
    pub fn compose(&self, other: &Poly<T>) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Poly::constant(c.clone());
        }
        acc
    }
}

impl<T: Ring + FromSmallInt> Poly<T> {
    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * T::from_i64(i as i64))
                .collect(),
        )
    }
}

impl<T: Field> Poly<T> {
    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly<T>) -> (Poly<T>, Poly<T>) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone() / lc.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, d: &Poly<T>) -> Poly<T> {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> Poly<T> {
        match self.leading() {
            Some(lc) => {
                let inv = T::one() / lc.clone();
                self.scale(&inv)
            }
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly<T>) -> Poly<T> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product `a * b mod m`.
    pub fn mul_mod(&self, other: &Poly<T>, m: &Poly<T>) -> Poly<T> {
        (self * other).rem(m)
    }

    /// `self^e mod m` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, m: &Poly<T>) -> Poly<T> {
        let mut base = self.rem(m);
        let mut acc = Poly::one().rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        acc
    }

    /// Inverse of `self` modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly<T>) -> Option<Poly<T>> {
        // extended Euclid tracking only the coefficient of `self`
        let (mut r0, mut r1) = (m.clone(), self.rem(m));
        let (mut s0, mut s1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return None;
        }
        let inv = T::one() / r0.coeffs[0].clone();
        Some(s0.scale(&inv).rem(m))
    }
}

impl<T: Ring> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<T: Ring> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Ring> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Ring> $tr for Poly<T> {
            type Output = Poly<T>;
            fn $m(self, rhs: Poly<T>) -> Poly<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Ring + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*x")?,
                _ => write!(f, "({c})*x^{i}")?,
            }
        }
        Ok(())
    }
}

impl<T: Ring> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn p(c: &[i64]) -> Poly<BigInt> {
        Poly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    fn q(c: &[i64]) -> Poly<BigRational> {
        Poly::new(c.iter().map(|&v| BigRational::from_integer(v.into())).collect())
    }

    #[test]
    fn trims_trailing_zeros() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
    }

    #[test]
    fn multiplication_and_eval() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!((&a * &b).eval(&BigInt::from(3)), BigInt::from(8));
    }

    #[test]
    fn division_and_gcd() {
        let f = q(&[-1, 0, 0, 0, 1]);
        let g = q(&[-1, 0, 1]);
        let (quot, rem) = f.div_rem(&g);
        assert!(rem.is_zero());
        assert_eq!(quot, q(&[1, 0, 1]));
        assert_eq!(f.gcd(&q(&[1, 1])), q(&[1, 1]));
    }

    #[test]
    fn inverse_mod_minpoly() {
        // in Q[x]/(x^2 - x - 1), x^{-1} = x - 1
        let m = q(&[-1, -1, 1]);
        let inv = q(&[0, 1]).inv_mod(&m).unwrap();
        assert_eq!(inv, q(&[-1, 1]));
    }

    #[test]
    fn generic_over_floats() {
        let f: Poly<f64> = Poly::new(vec![-2.0, 0.0, 1.0]);
        assert!((f.eval(&std::f64::consts::SQRT_2)).abs() < 1e-12);
        assert_eq!(f.derivative(), Poly::new(vec![0.0, 2.0]));
    }
}
