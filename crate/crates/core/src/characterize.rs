//! Deciding whether some choice of coefficients makes `sum q_i alpha_i^n`
//! exponentially close to integers, with a certificate, the per-`n`
//! condition checker, the ratio test for rational-function coefficients
//! and the all-ones trace witness.
//!
//! Exponents in certificates and witnesses are in reduced-index units:
//! after raising the bases to the torsion exponent `m`, index `t` stands
//! for `n = r + m t`.

use crate::algebraic::{
    alg_abs, alg_arith, alg_equals, alg_pow, compare_modulus_to_one, conjugates_of, interval_to_rationals,
    is_algebraic_integer, AlgebraicNumber, ArithOp,
};
use crate::error::{Error, Result};
use crate::field::{express_in, joint_conjugates, FieldElem, NumberField};
use crate::pisot::{classify_tuple, TupleClassification};
use crate::structure::{
    build_partition, reduce_with, torsion_exponent, torsion_ratio, ClassPartition, PowerSumSpec, ReductionCertificate,
};
use crate::Rational;
use num_traits::{One, Zero};
use std::cmp::Ordering;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Existence {
    Exists,
    NotExists,
}

/// Largest modulus of an adjoined conjugate.
#[derive(Clone, Debug, PartialEq)]
pub enum Theta0 {
    /// No conjugates are adjoined; every rate in (0, 1) works.
    Zero,
    Value { number: AlgebraicNumber, lo: Rational, hi: Rational },
}

impl Theta0 {
    pub fn upper(&self) -> Rational {
        match self {
            Theta0::Zero => Rational::zero(),
            Theta0::Value { hi, .. } => hi.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FailureReason {
    /// Reduced term `index` has a non-integral base.
    NonIntegral { index: usize, alpha: AlgebraicNumber },
    /// An adjoined conjugate with modulus at least one.
    LargeOutsideConjugate { class: usize, beta: AlgebraicNumber },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResidueResult {
    pub residue: u64,
    pub reduction: ReductionCertificate,
    /// `None` when every term cancels in this residue class.
    pub partition: Option<ClassPartition>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionCertificate {
    pub verdict: Existence,
    pub exponent_m: u64,
    pub residue_results: Vec<ResidueResult>,
    pub theta0: Theta0,
    pub failure_reasons: Vec<FailureReason>,
}

impl DecisionCertificate {
    /// Class members and adjoined conjugates of the all-ones reduction.
    fn base_partition(&self) -> Option<&ClassPartition> {
        self.residue_results.first().and_then(|r| r.partition.as_ref())
    }

    pub fn extra_conjugates(&self) -> Vec<AlgebraicNumber> {
        self.base_partition()
            .map(|p| p.classes.iter().flat_map(|c| c.full_conjugates[c.class_size..].iter().cloned()).collect())
            .unwrap_or_default()
    }

    /// Enclosure of `theta0^(1/m)`, the rate per original index.
    pub fn original_rate(&self) -> Option<(Rational, Rational)> {
        match &self.theta0 {
            Theta0::Zero => None,
            Theta0::Value { lo, hi, .. } => Some(nth_root_bounds(lo, hi, self.exponent_m, 80)),
        }
    }
}

/// Rational `[a, b]` with `a^m <= lo` and `hi <= b^m`, `b - a` about `2^-bits`.
pub fn nth_root_bounds(lo: &Rational, hi: &Rational, m: u64, bits: u32) -> (Rational, Rational) {
    if m == 1 {
        return (lo.clone(), hi.clone());
    }
    let root = |x: &Rational, upper: bool| {
        let (mut a, mut b) = (Rational::zero(), Rational::one().max(x.clone()));
        for _ in 0..bits {
            let mid = (&a + &b) / Rational::from_integer(2.into());
            if num_traits::pow(mid.clone(), m as usize) <= *x {
                a = mid;
            } else {
                b = mid;
            }
        }
        if upper {
            b
        } else {
            a
        }
    };
    (root(lo, false), root(hi, true))
}

/// Order of two real algebraic numbers.
pub fn compare_real(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Ordering {
    if alg_equals(a, b) {
        return Ordering::Equal;
    }
    let mut bits = 16;
    loop {
        let (x, y) = (a.enclosure(bits).re, b.enclosure(bits).re);
        if x.hi() < y.lo() {
            return Ordering::Less;
        }
        if y.hi() < x.lo() {
            return Ordering::Greater;
        }
        bits *= 2;
    }
}

/// Decide existence for the bases `alphas` (all of modulus at least one).
pub fn decide_existence(alphas: &[AlgebraicNumber]) -> Result<DecisionCertificate> {
    if alphas.is_empty() {
        return Err(Error::invalid("no bases given"));
    }
    for (i, a) in alphas.iter().enumerate() {
        if a.is_zero() {
            return Err(Error::invalid("bases must be nonzero"));
        }
        if compare_modulus_to_one(a)? == Ordering::Less {
            return Err(Error::structure(format!("base {i} has modulus below one; drop small terms first")));
        }
    }
    let spec = PowerSumSpec::unit_coefficients(alphas.to_vec())?;
    let m = torsion_exponent(alphas)?;
    let mut residue_results = Vec::new();
    for r in 0..m {
        let reduction = reduce_with(&spec, m, r)?;
        let partition = if reduction.reduced_terms.terms.is_empty() {
            None
        } else {
            Some(build_partition(&reduction.reduced_terms)?)
        };
        residue_results.push(ResidueResult { residue: r, reduction, partition });
    }

    let mut failure_reasons = Vec::new();
    let mut theta: Option<AlgebraicNumber> = None;
    // residue 0 carries coefficient k_i > 0 on every merged term, so
    // nothing cancels there
    let base = residue_results[0].partition.as_ref().expect("residue 0 keeps every base");
    for (idx, term) in base.classes.iter().flat_map(|c| &c.members) {
        if !is_algebraic_integer(&term.alpha) {
            failure_reasons.push(FailureReason::NonIntegral { index: *idx, alpha: term.alpha.clone() });
        }
    }
    for rr in &residue_results {
        let Some(p) = &rr.partition else { continue };
        for (ci, class) in p.classes.iter().enumerate() {
            for beta in &class.full_conjugates[class.class_size..] {
                if rr.residue == 0 && compare_modulus_to_one(beta)? != Ordering::Less {
                    failure_reasons.push(FailureReason::LargeOutsideConjugate { class: ci, beta: beta.clone() });
                }
                let b = alg_abs(beta)?;
                theta = match theta {
                    Some(t) if compare_real(&t, &b) != Ordering::Less => Some(t),
                    _ => Some(b),
                };
            }
        }
    }
    let theta0 = match theta {
        None => Theta0::Zero,
        Some(number) => {
            let (lo, hi) = interval_to_rationals(&number.enclosure(96).re);
            Theta0::Value { number, lo, hi }
        }
    };
    let verdict = if failure_reasons.is_empty() { Existence::Exists } else { Existence::NotExists };
    Ok(DecisionCertificate { verdict, exponent_m: m, residue_results, theta0, failure_reasons })
}

#[derive(Clone, Debug, PartialEq)]
pub struct WitnessTuple {
    /// Reduced index.
    pub n: u64,
    /// Coefficients on the reduced bases of residue class 0.
    pub qs: Vec<AlgebraicNumber>,
    pub alphas: Vec<AlgebraicNumber>,
    /// Enclosure `[lo, hi]` of the sum of `|beta|^n` over adjoined conjugates.
    pub distance_bound: (Rational, Rational),
}

/// All-ones witness: the sum over class members is a full trace minus the
/// adjoined conjugates, so its distance to the integers is at most the
/// sum of their `n`-th power moduli.
pub fn construct_witness(cert: &DecisionCertificate, n: u64) -> Result<WitnessTuple> {
    if cert.verdict != Existence::Exists {
        return Err(Error::invalid("no witness exists for a negative verdict"));
    }
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let p = cert.base_partition().ok_or_else(|| Error::Internal("missing partition".into()))?;
    let alphas: Vec<AlgebraicNumber> =
        p.classes.iter().flat_map(|c| c.members.iter().map(|(_, t)| t.alpha.clone())).collect();
    let qs = vec![AlgebraicNumber::one(); alphas.len()];
    let (mut lo, mut hi) = (Rational::zero(), Rational::zero());
    for beta in cert.extra_conjugates() {
        let e = beta.abs_enclosure(64 + 2 * n as i64);
        let (l, h) = interval_to_rationals(&e);
        lo += num_traits::pow(l.max(Rational::zero()), n as usize);
        hi += num_traits::pow(h, n as usize);
    }
    Ok(WitnessTuple { n, qs, alphas, distance_bound: (lo, hi) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConditionReport {
    pub n: u64,
    pub values: Vec<AlgebraicNumber>,
    /// Condition (i): `None` when the values repeat.
    pub classification: Option<TupleClassification>,
    pub cond_i: bool,
    pub cond_ii: bool,
    pub non_integral: Vec<usize>,
    pub cond_iii: bool,
    /// `(i, j, embedding)` where equality and torsion relation disagree.
    pub iii_violations: Vec<(usize, usize, usize)>,
    pub cond_iv: bool,
    /// `(i, conjugate)` unrelated to every base yet of modulus at least one.
    pub iv_violations: Vec<(usize, AlgebraicNumber)>,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.cond_i && self.cond_ii && self.cond_iii && self.cond_iv
    }
}

/// Evaluate conditions (i) to (iv) for one `n`. Embeddings in (iii) are
/// joint embeddings of `Q(alpha_i, q_i)`.
pub fn check_conditions(spec: &PowerSumSpec, n: u64) -> Result<ConditionReport> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let values: Vec<AlgebraicNumber> = spec
        .terms
        .iter()
        .map(|t| alg_arith(&t.q, &alg_pow(&t.alpha, n), ArithOp::Mul))
        .collect::<Result<_>>()?;
    let classification = match classify_tuple(&values) {
        Ok(c) => Some(c),
        Err(Error::InvalidInput(_)) => None,
        Err(e) => return Err(e),
    };
    let cond_i = classification.as_ref().is_some_and(|c| c.failing_condition.is_none());
    let non_integral: Vec<usize> =
        spec.terms.iter().enumerate().filter(|(_, t)| !is_algebraic_integer(&t.alpha)).map(|(i, _)| i).collect();

    let mut iii_violations = Vec::new();
    for (i, t) in spec.terms.iter().enumerate() {
        let joint = joint_conjugates(&[t.alpha.clone(), t.q.clone()])?;
        for (k, img) in joint.images.iter().enumerate() {
            let v = alg_arith(&img[1], &alg_pow(&img[0], n), ArithOp::Mul)?;
            for (j, u) in spec.terms.iter().enumerate() {
                let related = torsion_ratio(&img[0], &u.alpha)?.is_some();
                if related != alg_equals(&v, &values[j]) {
                    iii_violations.push((i, j, k));
                }
            }
        }
    }

    let mut iv_violations = Vec::new();
    for (i, t) in spec.terms.iter().enumerate() {
        for c in conjugates_of(&t.alpha) {
            let mut related = false;
            for u in &spec.terms {
                if torsion_ratio(&c, &u.alpha)?.is_some() {
                    related = true;
                    break;
                }
            }
            if !related && compare_modulus_to_one(&c)? != Ordering::Less {
                iv_violations.push((i, c));
            }
        }
    }
    Ok(ConditionReport {
        n,
        values,
        classification,
        cond_i,
        cond_ii: non_integral.is_empty(),
        non_integral,
        cond_iii: iii_violations.is_empty(),
        iii_violations,
        cond_iv: iv_violations.is_empty(),
        iv_violations,
    })
}

/// `num / den`, coefficients listed from degree 0.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalFunction {
    pub num: Vec<AlgebraicNumber>,
    pub den: Vec<AlgebraicNumber>,
}

impl RationalFunction {
    pub fn polynomial(num: Vec<AlgebraicNumber>) -> Self {
        RationalFunction { num, den: vec![AlgebraicNumber::one()] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioEntry {
    pub i: usize,
    pub j: usize,
    /// The conjugate `sigma(alpha_i)` related to `alpha_j`.
    pub conjugate: AlgebraicNumber,
    /// The constant `R_j / sigma(R_i)`, if it is constant.
    pub constant: Option<AlgebraicNumber>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RatioReport {
    pub entries: Vec<RatioEntry>,
    pub all_constant: bool,
}

fn trim(mut p: Vec<AlgebraicNumber>) -> Vec<AlgebraicNumber> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Result<Vec<AlgebraicNumber>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![AlgebraicNumber::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            if x.is_zero() || y.is_zero() {
                continue;
            }
            let p = alg_arith(x, y, ArithOp::Mul)?;
            out[i + j] = alg_arith(&out[i + j], &p, ArithOp::Add)?;
        }
    }
    Ok(trim(out))
}

fn express_all(field: &NumberField, cs: &[AlgebraicNumber]) -> Result<Vec<FieldElem>> {
    cs.iter()
        .map(|c| {
            express_in(c, field)?.ok_or_else(|| Error::invalid(format!("coefficient {c} is not in Q({})", field.generator())))
        })
        .collect()
}

/// For every conjugate `sigma(alpha_i)` differing from some `alpha_j` by a
/// root of unity, test whether `R_j / sigma(R_i)` is constant.
pub fn corollary1_ratio_check(pairs: &[(RationalFunction, AlgebraicNumber)]) -> Result<RatioReport> {
    struct Prepared {
        field: NumberField,
        num: Vec<FieldElem>,
        den: Vec<FieldElem>,
    }
    let mut prepared = Vec::new();
    for (r, a) in pairs {
        if trim(r.num.clone()).is_empty() || trim(r.den.clone()).is_empty() {
            return Err(Error::invalid("rational functions must be nonzero"));
        }
        let field = NumberField::new(a.clone());
        let num = express_all(&field, &r.num)?;
        let den = express_all(&field, &r.den)?;
        prepared.push(Prepared { field, num, den });
    }
    let mut entries = Vec::new();
    for (i, (_, ai)) in pairs.iter().enumerate() {
        let pi = &prepared[i];
        for beta in conjugates_of(ai) {
            for (j, (rj, aj)) in pairs.iter().enumerate() {
                if torsion_ratio(&beta, aj)?.is_none() {
                    continue;
                }
                let map = |cs: &[FieldElem]| -> Result<Vec<AlgebraicNumber>> {
                    Ok(trim(cs.iter().map(|c| pi.field.embed(c, &beta)).collect::<Result<_>>()?))
                };
                let (sn, sd) = (map(&pi.num)?, map(&pi.den)?);
                let lhs = poly_mul(&trim(rj.num.clone()), &sd)?;
                let rhs = poly_mul(&sn, &trim(rj.den.clone()))?;
                entries.push(RatioEntry { i, j, conjugate: beta.clone(), constant: proportional(&lhs, &rhs)? });
            }
        }
    }
    let all_constant = entries.iter().all(|e| e.constant.is_some());
    Ok(RatioReport { entries, all_constant })
}

/// `k` with `a = k b`, if any.
fn proportional(a: &[AlgebraicNumber], b: &[AlgebraicNumber]) -> Result<Option<AlgebraicNumber>> {
    if a.len() != b.len() || a.is_empty() {
        return Ok(None);
    }
    let k = alg_arith(a.last().unwrap(), b.last().unwrap(), ArithOp::Div)?;
    for (x, y) in a.iter().zip(b) {
        if !alg_equals(x, &alg_arith(&k, y, ArithOp::Mul)?) {
            return Ok(None);
        }
    }
    Ok(Some(k))
}
