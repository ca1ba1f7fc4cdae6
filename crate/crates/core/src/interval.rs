//! Outward-rounded real and complex (rectangular) interval arithmetic over
//! [`Dyadic`] endpoints, plus a rigorous natural logarithm.

use crate::dyadic::{Dyadic, Round};
use crate::Rational;
use num_bigint::BigInt;
use std::ops::{Add, Mul, Neg, Sub};

/// Closed real interval `[lo, hi]`. `prec` is the number of significant
/// bits results are rounded to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi, prec }
    }

    pub fn point(x: Dyadic, prec: u32) -> Self {
        Interval { lo: x.clone(), hi: x, prec }
    }

    pub fn zero(prec: u32) -> Self {
        Interval::point(Dyadic::zero(), prec)
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        Interval::point(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(r, prec, Round::Floor),
            hi: Dyadic::from_rational(r, prec, Round::Ceil),
            prec,
        }
    }

    pub fn from_rationals(lo: &Rational, hi: &Rational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational(lo, prec, Round::Floor),
            hi: Dyadic::from_rational(hi, prec, Round::Ceil),
            prec,
        }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self
    }

    pub fn mid(&self) -> Dyadic {
        Dyadic::midpoint(&self.lo, &self.hi)
    }

    pub fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// Upper bound on `|x|` over the interval.
    pub fn mag(&self) -> Dyadic {
        Dyadic::max(&self.lo.abs(), &self.hi.abs())
    }

    /// Lower bound on `|x|` over the interval.
    pub fn mig(&self) -> Dyadic {
        if self.contains_zero() {
            Dyadic::zero()
        } else {
            Dyadic::min(&self.lo.abs(), &self.hi.abs())
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.signum() <= 0 && self.hi.signum() >= 0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn is_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = Dyadic::max(&self.lo, &other.lo);
        let hi = Dyadic::min(&self.hi, &other.hi);
        (lo <= hi).then(|| Interval { lo, hi, prec: self.prec.max(other.prec) })
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: Dyadic::min(&self.lo, &other.lo),
            hi: Dyadic::max(&self.hi, &other.hi),
            prec: self.prec.max(other.prec),
        }
    }

    /// `self` lies in the open interior of `other`.
    pub fn strictly_inside(&self, other: &Interval) -> bool {
        other.lo < self.lo && self.hi < other.hi
    }

    pub fn subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// Widen by `r >= 0` on both sides.
    pub fn inflate(&self, r: &Dyadic) -> Interval {
        Interval { lo: &self.lo - r, hi: &self.hi + r, prec: self.prec }
    }

    fn rounded(lo: Dyadic, hi: Dyadic, prec: u32) -> Interval {
        Interval { lo: lo.round(prec, Round::Floor), hi: hi.round(prec, Round::Ceil), prec }
    }

    pub fn sqr(&self) -> Interval {
        let (a, b) = (&self.lo * &self.lo, &self.hi * &self.hi);
        if self.contains_zero() {
            Interval::rounded(Dyadic::zero(), Dyadic::max(&a, &b), self.prec)
        } else {
            Interval::rounded(Dyadic::min(&a, &b), Dyadic::max(&a, &b), self.prec)
        }
    }

    pub fn powi(&self, mut e: u64) -> Interval {
        let mut acc = Interval::from_int(1, self.prec);
        let mut base = self.clone();
        // odd powers keep sign information, so multiply rather than square
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    /// `None` when the divisor contains zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let p = self.prec.max(other.prec);
        let cands = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = cands.iter().map(|(a, b)| a.div(b, p, Round::Floor)).min().unwrap();
        let hi = cands.iter().map(|(a, b)| a.div(b, p, Round::Ceil)).max().unwrap();
        Some(Interval { lo, hi, prec: p })
    }

    /// Square root; negative parts are clipped to zero.
    pub fn sqrt(&self) -> Interval {
        let lo = if self.lo.signum() > 0 {
            self.lo.sqrt(self.prec, Round::Floor)
        } else {
            Dyadic::zero()
        };
        let hi = if self.hi.signum() > 0 {
            self.hi.sqrt(self.prec, Round::Ceil)
        } else {
            Dyadic::zero()
        };
        Interval { lo, hi, prec: self.prec }
    }

    pub fn abs(&self) -> Interval {
        Interval { lo: self.mig(), hi: self.mag(), prec: self.prec }
    }

    /// Pointwise `max(1, x)`.
    pub fn max_one(&self) -> Interval {
        let one = Dyadic::one();
        Interval { lo: Dyadic::max(&self.lo, &one), hi: Dyadic::max(&self.hi, &one), prec: self.prec }
    }

    /// Rigorous natural logarithm; `None` unless the interval is positive.
    pub fn ln(&self) -> Option<Interval> {
        if !self.is_positive() {
            return None;
        }
        let lo = ln_bounds(&self.lo, self.prec).0;
        let hi = ln_bounds(&self.hi, self.prec).1;
        Some(Interval { lo, hi, prec: self.prec })
    }

    pub fn to_f64(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::rounded(&self.lo + &rhs.lo, &self.hi + &rhs.hi, self.prec.max(rhs.prec))
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::rounded(&self.lo - &rhs.hi, &self.hi - &rhs.lo, self.prec.max(rhs.prec))
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let p = self.prec.max(rhs.prec);
        if self.is_point() && rhs.is_point() {
            let v = &self.lo * &rhs.lo;
            return Interval::rounded(v.clone(), v, p);
        }
        let c = [&self.lo * &rhs.lo, &self.lo * &rhs.hi, &self.hi * &rhs.lo, &self.hi * &rhs.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::rounded(lo, hi, p)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, prec: self.prec }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        &self + &rhs
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        &self - &rhs
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        &self * &rhs
    }
}

/// Lower and upper bounds of `atanh(t)` for `0 <= t <= 1/3`.
fn atanh_bounds(t_lo: &Dyadic, t_hi: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    let wp = prec + 16;
    // t <= 1/3 so each pair of terms gains log2(9) > 3 bits
    let terms = (wp as u64 + 8) / 3 + 2;
    let series = |t: &Dyadic, mode: Round| {
        let t2 = (t * t).round(wp, mode);
        let mut pow = t.clone();
        let mut acc = Dyadic::zero();
        for j in 0..terms {
            let term = pow.div(&Dyadic::from_int(2 * j + 1), wp, mode);
            acc = (&acc + &term).round(wp, mode);
            pow = (&pow * &t2).round(wp, mode);
        }
        // `pow` now bounds t^(2*terms+1); the tail is at most 2 * pow
        (acc, pow)
    };
    let (lo, _) = series(t_lo, Round::Floor);
    let (hi, tail) = series(t_hi, Round::Ceil);
    (lo, (&hi + &tail.mul_pow2(1)).round(wp, Round::Ceil))
}

/// Bounds on `ln 2 = 2 atanh(1/3)`.
pub fn ln2_bounds(prec: u32) -> (Dyadic, Dyadic) {
    let wp = prec + 16;
    let third_lo = Dyadic::one().div(&Dyadic::from_int(3), wp, Round::Floor);
    let third_hi = Dyadic::one().div(&Dyadic::from_int(3), wp, Round::Ceil);
    let (lo, hi) = atanh_bounds(&third_lo, &third_hi, prec);
    (lo.mul_pow2(1), hi.mul_pow2(1))
}

/// Rigorous bounds on `ln x` for a positive dyadic `x`.
pub fn ln_bounds(x: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    assert!(x.signum() > 0, "ln of non-positive value");
    let wp = prec + 16;
    let mut k = x.ilog2().unwrap();
    let mut y = x.mul_pow2(-k);
    // keep y within [2/3, 4/3] so |s| <= 1/5
    if y > Dyadic::from_int(4).div(&Dyadic::from_int(3), 8, Round::Floor) {
        y = y.mul_pow2(-1);
        k += 1;
    }
    let one = Dyadic::one();
    let num = &y - &one;
    let den = &y + &one;
    let s_lo = num.div(&den, wp, Round::Floor);
    let s_hi = num.div(&den, wp, Round::Ceil);
    // ln y = 2 atanh(s), odd and increasing in s
    let at = |s: &Dyadic, upper: bool| -> Dyadic {
        if s.signum() >= 0 {
            let (lo, hi) = atanh_bounds(s, s, prec);
            if upper {
                hi
            } else {
                lo
            }
        } else {
            let m = -s;
            let (lo, hi) = atanh_bounds(&m, &m, prec);
            if upper {
                -lo
            } else {
                -hi
            }
        }
    };
    let ly_lo = at(&s_lo, false).mul_pow2(1);
    let ly_hi = at(&s_hi, true).mul_pow2(1);
    let (l2_lo, l2_hi) = ln2_bounds(prec);
    let kd = Dyadic::from_int(k);
    let (k_lo, k_hi) = if k >= 0 {
        (&kd * &l2_lo, &kd * &l2_hi)
    } else {
        (&kd * &l2_hi, &kd * &l2_lo)
    };
    (
        (&k_lo + &ly_lo).round(wp, Round::Floor),
        (&k_hi + &ly_hi).round(wp, Round::Ceil),
    )
}

/// Rectangular complex interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CInterval {
    pub re: Interval,
    pub im: Interval,
}

impl CInterval {
    pub fn new(re: Interval, im: Interval) -> Self {
        CInterval { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec();
        CInterval { re, im: Interval::zero(p) }
    }

    pub fn point(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        CInterval { re: Interval::point(re, prec), im: Interval::point(im, prec) }
    }

    pub fn from_int(v: impl Into<BigInt>, prec: u32) -> Self {
        CInterval::real(Interval::from_int(v, prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> CInterval {
        CInterval { re: self.re.clone(), im: -&self.im }
    }

    pub fn sqr(&self) -> CInterval {
        let re = &self.re.sqr() - &self.im.sqr();
        let im = (&self.re * &self.im).scale_pow2(1);
        CInterval { re, im }
    }

    pub fn abs_sq(&self) -> Interval {
        &self.re.sqr() + &self.im.sqr()
    }

    pub fn abs(&self) -> Interval {
        if self.im.is_point() && self.im.lo().is_zero() {
            return self.re.abs();
        }
        self.abs_sq().sqrt()
    }

    pub fn powi(&self, mut e: u64) -> CInterval {
        let mut acc = CInterval::from_int(1, self.prec());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        acc
    }

    pub fn div(&self, other: &CInterval) -> Option<CInterval> {
        if other.im.is_point() && other.im.lo().is_zero() {
            return Some(CInterval { re: self.re.div(&other.re)?, im: self.im.div(&other.re)? });
        }
        let den = other.abs_sq();
        let num = self * &other.conj();
        Some(CInterval { re: num.re.div(&den)?, im: num.im.div(&den)? })
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn width(&self) -> Dyadic {
        Dyadic::max(&self.re.width(), &self.im.width())
    }

    pub fn intersects(&self, other: &CInterval) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn subset_of(&self, other: &CInterval) -> bool {
        self.re.subset_of(&other.re) && self.im.subset_of(&other.im)
    }

    pub fn hull(&self, other: &CInterval) -> CInterval {
        CInterval { re: self.re.hull(&other.re), im: self.im.hull(&other.im) }
    }

    pub fn mid(&self) -> (Dyadic, Dyadic) {
        (self.re.mid(), self.im.mid())
    }

    pub fn inflate(&self, r: &Dyadic) -> CInterval {
        CInterval { re: self.re.inflate(r), im: self.im.inflate(r) }
    }
}

impl Interval {
    /// Exact multiplication by `2^k`.
    pub fn scale_pow2(&self, k: i64) -> Interval {
        Interval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k), prec: self.prec }
    }
}

impl Add for &CInterval {
    type Output = CInterval;
    fn add(self, rhs: &CInterval) -> CInterval {
        CInterval { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &CInterval {
    type Output = CInterval;
    fn sub(self, rhs: &CInterval) -> CInterval {
        CInterval { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &CInterval {
    type Output = CInterval;
    fn mul(self, rhs: &CInterval) -> CInterval {
        let self_real = self.im.is_point() && self.im.lo().is_zero();
        let rhs_real = rhs.im.is_point() && rhs.im.lo().is_zero();
        if self_real && rhs_real {
            return CInterval::real(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        CInterval { re, im }
    }
}

impl Neg for &CInterval {
    type Output = CInterval;
    fn neg(self) -> CInterval {
        CInterval { re: -&self.re, im: -&self.im }
    }
}

impl Add for CInterval {
    type Output = CInterval;
    fn add(self, rhs: CInterval) -> CInterval {
        &self + &rhs
    }
}

impl Mul for CInterval {
    type Output = CInterval;
    fn mul(self, rhs: CInterval) -> CInterval {
        &self * &rhs
    }
}

impl num_traits::Zero for CInterval {
    fn zero() -> Self {
        CInterval::from_int(0, 64)
    }
    fn is_zero(&self) -> bool {
        self.re.is_point() && self.im.is_point() && self.re.lo().is_zero() && self.im.lo().is_zero()
    }
}

impl num_traits::Zero for Interval {
    fn zero() -> Self {
        Interval::zero(64)
    }
    fn is_zero(&self) -> bool {
        self.is_point() && self.lo.is_zero()
    }
}
