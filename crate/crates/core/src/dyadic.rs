//! Binary floating-point numbers with arbitrary-precision mantissas.
//!
//! A [`Dyadic`] is the exact rational `mant * 2^exp`. Addition, subtraction
//! and multiplication are exact; precision is only lost through explicit
//! calls to [`Dyadic::round`] or [`Dyadic::div`], which take a rounding
//! direction so interval code can round outward.

use crate::Rational;
use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    /// Truncation toward zero; used only for approximate (non-rigorous) work.
    Trunc,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        if mant.is_zero() {
            return Dyadic { mant, exp: 0 };
        }
        let tz = mant.trailing_zeros().unwrap_or(0) as i64;
        if tz > 0 {
            Dyadic { mant: mant >> tz as usize, exp: exp + tz }
        } else {
            Dyadic { mant, exp }
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^k`.
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    /// Exact conversion of a finite `f64`.
    pub fn from_f64(v: f64) -> Self {
        if v == 0.0 || !v.is_finite() {
            return Dyadic::zero();
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 0 { 1i64 } else { -1 };
        let exp_bits = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_bits == 0 {
            (frac as i64, -1074)
        } else {
            ((frac | (1u64 << 52)) as i64, exp_bits - 1075)
        };
        Dyadic::new(BigInt::from(sign * mant), exp)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Floor of log2 |x|; `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 - 1 + self.exp)
        }
    }

    /// Round to at most `prec` significant bits in the given direction.
    pub fn round(&self, prec: u32, mode: Round) -> Self {
        let bits = self.mant.bits() as i64;
        let excess = bits - prec.max(1) as i64;
        if excess <= 0 {
            return self.clone();
        }
        Dyadic::new(shift_round(&self.mant, excess as u64, mode), self.exp + excess)
    }

    /// Round to a multiple of `2^exp` in the given direction.
    pub fn round_to_exp(&self, exp: i64, mode: Round) -> Self {
        if self.exp >= exp {
            return self.clone();
        }
        let sh = (exp - self.exp) as u64;
        Dyadic::new(shift_round(&self.mant, sh, mode), exp)
    }

    /// Quotient rounded to about `prec` significant bits.
    pub fn div(&self, other: &Dyadic, prec: u32, mode: Round) -> Self {
        assert!(!other.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // scale numerator so the integer quotient carries prec+2 bits
        let shift = (prec as i64 + 2 + other.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num = &self.mant << shift as usize;
        let (q, r) = num.div_rem(&other.mant);
        let q = adjust_quotient(q, &r, &num, &other.mant, mode);
        Dyadic::new(q, self.exp - shift - other.exp).round(prec, mode)
    }

    /// Square root rounded to about `prec` significant bits; `x` must be >= 0.
    pub fn sqrt(&self, prec: u32, mode: Round) -> Self {
        assert!(self.signum() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // make the exponent even and the mantissa large enough
        let mut shift = (2 * prec as i64 + 4 - self.mant.bits() as i64).max(0);
        if (self.exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let s = match mode {
            Round::Ceil if !exact => s + 1,
            _ => s,
        };
        Dyadic::new(s, (self.exp - shift) / 2).round(prec, mode)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exp >= 0 {
            Rational::from_integer(&self.mant << self.exp as usize)
        } else {
            Rational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    /// Round a rational to `prec` significant bits.
    pub fn from_rational(r: &Rational, prec: u32, mode: Round) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let num = Dyadic::from_int(r.numer().clone());
        if r.denom().is_one() {
            return num.round(prec, mode);
        }
        let den = Dyadic::from_int(r.denom().clone());
        if r.denom().is_power_of_two() {
            let k = r.denom().bits() as i64 - 1;
            return num.mul_pow2(-k).round(prec, mode);
        }
        num.div(&den, prec, mode)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let keep = 60.min(bits);
        let top = (&self.mant >> (bits - keep) as usize).to_f64().unwrap_or(0.0);
        let e = self.exp + bits - keep;
        if e > 2000 {
            return top.signum() * f64::INFINITY;
        }
        if e < -2200 {
            return 0.0;
        }
        let half = e / 2;
        top * 2f64.powi(half as i32) * 2f64.powi((e - half) as i32)
    }

    /// `floor(self)` as an integer.
    pub fn floor_int(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        -(-self).floor_int()
    }

    /// Midpoint (exact).
    pub fn midpoint(a: &Dyadic, b: &Dyadic) -> Dyadic {
        (a + b).mul_pow2(-1)
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

trait PowerOfTwo {
    fn is_power_of_two(&self) -> bool;
}

impl PowerOfTwo for BigInt {
    fn is_power_of_two(&self) -> bool {
        self.is_positive() && self.trailing_zeros() == Some(self.bits() - 1)
    }
}

fn shift_round(m: &BigInt, sh: u64, mode: Round) -> BigInt {
    let floor = m >> sh as usize; // arithmetic shift = floor division
    match mode {
        Round::Floor => floor,
        Round::Ceil => {
            if (&floor << sh as usize) == *m {
                floor
            } else {
                floor + 1
            }
        }
        Round::Trunc => {
            if m.is_negative() && (&floor << sh as usize) != *m {
                floor + 1
            } else {
                floor
            }
        }
    }
}

/// `div_rem` truncates toward zero; adjust to the requested direction.
fn adjust_quotient(q: BigInt, r: &BigInt, num: &BigInt, den: &BigInt, mode: Round) -> BigInt {
    if r.is_zero() {
        return q;
    }
    let negative = num.is_negative() != den.is_negative();
    match mode {
        Round::Trunc => q,
        Round::Floor => {
            if negative {
                q - 1
            } else {
                q
            }
        }
        Round::Ceil => {
            if negative {
                q
            } else {
                q + 1
            }
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        // same sign: compare magnitudes quickly by bit position first
        let (la, lb) = (self.ilog2().unwrap(), other.ilog2().unwrap());
        if la != lb {
            let mag = la.cmp(&lb);
            return if sa > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        a.cmp(&b)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &rhs.mant << (rhs.exp - e) as usize;
        Dyadic::new(a + b, e)
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: &self.mant * &rhs.mant, exp: self.exp + rhs.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -&self
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        &self + &rhs
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        &self - &rhs
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        &self * &rhs
    }
}

impl Zero for Dyadic {
    fn zero() -> Self {
        Dyadic::zero()
    }
    fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_directions() {
        let third_lo = Dyadic::from_rational(&r(1, 3), 20, Round::Floor);
        let third_hi = Dyadic::from_rational(&r(1, 3), 20, Round::Ceil);
        assert!(third_lo.to_rational() < r(1, 3));
        assert!(third_hi.to_rational() > r(1, 3));
        let neg_lo = Dyadic::from_rational(&r(-1, 3), 20, Round::Floor);
        assert!(neg_lo.to_rational() < r(-1, 3));
        assert_eq!(neg_lo, -&third_hi);
    }

    #[test]
    fn exact_ops_and_ordering() {
        let a = Dyadic::from_f64(1.5);
        let b = Dyadic::from_f64(-0.25);
        assert_eq!((&a + &b).to_rational(), r(5, 4));
        assert_eq!((&a * &b).to_rational(), r(-3, 8));
        assert!(b < a);
        assert!(Dyadic::from_f64(-3.0) < b);
        assert_eq!(Dyadic::from_f64(0.75).ilog2(), Some(-1));
    }

    #[test]
    fn sqrt_brackets() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(64, Round::Floor);
        let hi = two.sqrt(64, Round::Ceil);
        assert!(&lo * &lo < two);
        assert!(&hi * &hi > two);
        assert!((&hi - &lo).ilog2().unwrap() <= -62);
        let four = Dyadic::from_int(4);
        assert_eq!(four.sqrt(10, Round::Ceil), Dyadic::from_int(2));
    }

    #[test]
    fn floor_and_ceil() {
        let x = Dyadic::from_f64(-2.5);
        assert_eq!(x.floor_int(), BigInt::from(-3));
        assert_eq!(x.ceil_int(), BigInt::from(-2));
        assert!((Dyadic::from_f64(1e-300).to_f64() - 1e-300).abs() < 1e-310);
    }
}
