//! Absolute logarithmic Weil height via the Mahler measure, and the
//! sublinear height budgets it is compared against.

use crate::algebraic::{conjugates_of, root_of_unity_order, AlgebraicNumber};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Rigorous enclosure `[lo, hi]` of a height, in natural-log units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightValue {
    pub lo: Rational,
    pub hi: Rational,
    /// Set when the height is known to be exactly zero (roots of unity).
    pub exact_zero: bool,
}

impl HeightValue {
    pub fn zero() -> Self {
        HeightValue { lo: Rational::zero(), hi: Rational::zero(), exact_zero: true }
    }

    /// Midpoint of the enclosure.
    pub fn value(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    /// Half-width of the enclosure: `|h - value()| <= rigorous_error()`.
    pub fn rigorous_error(&self) -> Rational {
        (&self.hi - &self.lo) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn to_f64(&self) -> f64 {
        self.value().to_f64().unwrap_or(f64::NAN)
    }
}

/// Enclosure of `h(a)` at one working precision.
fn height_at(a: &AlgebraicNumber, conj: &[AlgebraicNumber], bits: u32) -> Interval {
    let prec = bits + 32;
    let d = a.degree() as i64;
    let lc = a.minpoly().leading().unwrap().clone();
    let mut sum = Interval::from_int(lc, prec).ln().expect("positive leading coefficient");
    for r in conj {
        let m = r.abs_enclosure(bits as i64 + 16).with_prec(prec).max_one();
        sum = &sum + &m.ln().expect("modulus at least one");
    }
    sum.div(&Interval::from_int(d, prec)).expect("positive degree")
}

/// Weil height of a nonzero algebraic number. The enclosure has half-width
/// below `2^-(precision_bits - 8)`; it is the intersection of enclosures
/// computed at every power-of-two level from 32 up to `precision_bits`
/// (rounded up), so raising the precision never widens it.
pub fn weil_height(a: &AlgebraicNumber, precision_bits: u32) -> Result<HeightValue> {
    if a.is_zero() {
        return Err(Error::InvalidInput("height of zero is undefined".into()));
    }
    if root_of_unity_order(a)?.is_some() {
        return Ok(HeightValue::zero());
    }
    let conj = conjugates_of(a);
    let eff = precision_bits.max(32).next_power_of_two();
    let mut lo = Rational::zero();
    let mut hi: Option<Rational> = None;
    let mut level = 32;
    while level <= eff {
        let e = height_at(a, &conj, level);
        let (l, h) = (e.lo().to_rational(), e.hi().to_rational());
        if l > lo {
            lo = l;
        }
        hi = Some(match hi {
            Some(cur) if cur < h => cur,
            _ => h,
        });
        level *= 2;
    }
    let hi = hi.unwrap();
    Ok(HeightValue { lo, hi, exact_zero: false })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BudgetForm {
    /// `c * n^e` with `0 < e < 1`.
    Power,
    /// `c * n / log(n + 2)`.
    LogShaved,
}

/// A sublinear bound `f(n)` on coefficient heights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SublinearBudget {
    pub form: BudgetForm,
    pub c: Rational,
    pub e: Option<Rational>,
}

impl SublinearBudget {
    pub fn power(c: Rational, e: Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidInput("budget constant must be positive".into()));
        }
        if !e.is_positive() || e >= Rational::one() {
            return Err(Error::InvalidInput("budget exponent must lie in (0, 1)".into()));
        }
        Ok(SublinearBudget { form: BudgetForm::Power, c, e: Some(e) })
    }

    pub fn log_shaved(c: Rational) -> Result<Self> {
        if !c.is_positive() {
            return Err(Error::InvalidInput("budget constant must be positive".into()));
        }
        Ok(SublinearBudget { form: BudgetForm::LogShaved, c, e: None })
    }
}

/// Whether the upper end of the height enclosure lies strictly below `f(n)`.
pub fn budget_check(h: &HeightValue, budget: &SublinearBudget, n: u64) -> bool {
    let hh = &h.hi;
    if !hh.is_positive() {
        return true;
    }
    let nn = Rational::from_integer(BigInt::from(n));
    match budget.form {
        BudgetForm::Power => {
            // hh < c n^(p/q)  <=>  (hh / c)^q < n^p
            let e = budget.e.as_ref().expect("power budget carries an exponent");
            let p = e.numer().to_u32().expect("small exponent numerator");
            let q = e.denom().to_u32().expect("small exponent denominator");
            let lhs = num_traits::pow::Pow::pow(&(hh / &budget.c), q);
            let rhs = num_traits::pow::Pow::pow(&nn, p);
            lhs < rhs
        }
        BudgetForm::LogShaved => {
            // hh < c n / ln(n + 2)  <=>  hh ln(n + 2) < c n
            let target = &budget.c * &nn;
            let mut prec = 64;
            loop {
                let l = Interval::from_int(n + 2, prec).ln().expect("positive argument");
                let lo = hh * l.lo().to_rational();
                let hi = hh * l.hi().to_rational();
                if hi < target {
                    return true;
                }
                if lo >= target {
                    return false;
                }
                prec *= 2;
            }
        }
    }
}

/// Natural logarithm enclosure of a positive rational, for tests and reports.
pub fn ln_rational(r: &Rational, prec: u32) -> (Rational, Rational) {
    let lo = Dyadic::from_rational(r, prec + 8, crate::dyadic::Round::Floor);
    let hi = Dyadic::from_rational(r, prec + 8, crate::dyadic::Round::Ceil);
    let e = Interval::new(lo, hi, prec).ln().expect("positive argument");
    (e.lo().to_rational(), e.hi().to_rational())
}
