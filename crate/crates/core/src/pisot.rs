//! Pisot numbers and pseudo-Pisot tuples.

use crate::algebraic::{
    alg_equals, compare_modulus_to_one, conjugates_of, is_algebraic_integer, AlgebraicNumber,
};
use crate::error::{Error, Result};
use crate::Rational;
use num_traits::One;
use std::cmp::Ordering;

/// Real algebraic integer above one whose other conjugates lie strictly
/// inside the unit circle.
pub fn is_pisot_number(a: &AlgebraicNumber) -> Result<bool> {
    if a.is_zero() || !a.is_real() || !is_algebraic_integer(a) {
        return Ok(false);
    }
    if let Some(r) = a.rational_value() {
        return Ok(r > &Rational::one());
    }
    if a.real_sign() <= 0 || compare_modulus_to_one(a)? != Ordering::Greater {
        return Ok(false);
    }
    for c in conjugates_of(a) {
        if !alg_equals(&c, a) && compare_modulus_to_one(&c)? != Ordering::Less {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    PseudoPisot,
    Pisot,
    Neither,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FailingCondition {
    SumNotInteger(Rational),
    LargeExtraConjugate(AlgebraicNumber),
}

#[derive(Clone, Debug, PartialEq)]
pub struct TupleClassification {
    pub verdict: Verdict,
    /// Conjugates of the entries that are not themselves entries.
    pub extra_conjugates: Vec<AlgebraicNumber>,
    /// The completed sum; always rational since it is a sum of full
    /// conjugate sets.
    pub completed_sum: Rational,
    pub failing_condition: Option<FailingCondition>,
}

fn check_entries(betas: &[AlgebraicNumber]) -> Result<()> {
    if betas.is_empty() {
        return Err(Error::invalid("empty tuple"));
    }
    if betas.iter().any(|b| b.is_zero()) {
        return Err(Error::invalid("tuple entries must be nonzero"));
    }
    for i in 0..betas.len() {
        for j in i + 1..betas.len() {
            if alg_equals(&betas[i], &betas[j]) {
                return Err(Error::invalid(format!("entries {i} and {j} are equal")));
            }
        }
    }
    Ok(())
}

/// The set `B`, in order of first appearance.
fn extra_conjugates(betas: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for b in betas {
        if seen.contains(b.minpoly()) {
            continue;
        }
        seen.push(b.minpoly().clone());
        for c in conjugates_of(b) {
            if !betas.iter().any(|x| alg_equals(x, &c)) {
                out.push(c);
            }
        }
    }
    out
}

/// Sum of the entries and `B`. The union is a union of full conjugate
/// sets, so the sum is the sum of `-a_{d-1} / a_d` over the distinct
/// minimal polynomials.
fn trace_sum(betas: &[AlgebraicNumber]) -> Rational {
    let mut seen = Vec::new();
    let mut s = Rational::from_integer(0.into());
    for b in betas {
        if seen.contains(b.minpoly()) {
            continue;
        }
        seen.push(b.minpoly().clone());
        let c = b.minpoly().coeffs();
        let d = c.len() - 1;
        s += Rational::new(-c[d - 1].clone(), c[d].clone());
    }
    s
}

/// Exact sum of the entries together with all their other conjugates.
pub fn completed_trace(betas: &[AlgebraicNumber]) -> Result<AlgebraicNumber> {
    check_entries(betas)?;
    Ok(AlgebraicNumber::from_rational(trace_sum(betas)))
}

pub fn classify_tuple(betas: &[AlgebraicNumber]) -> Result<TupleClassification> {
    check_entries(betas)?;
    let extra = extra_conjugates(betas);
    let sum = trace_sum(betas);
    let mut failing = None;
    if !sum.is_integer() {
        failing = Some(FailingCondition::SumNotInteger(sum.clone()));
    } else {
        for b in &extra {
            if compare_modulus_to_one(b)? != Ordering::Less {
                failing = Some(FailingCondition::LargeExtraConjugate(b.clone()));
                break;
            }
        }
    }
    let verdict = match failing {
        Some(_) => Verdict::Neither,
        None if betas.iter().all(is_algebraic_integer) => Verdict::Pisot,
        None => Verdict::PseudoPisot,
    };
    Ok(TupleClassification { verdict, extra_conjugates: extra, completed_sum: sum, failing_condition: failing })
}
