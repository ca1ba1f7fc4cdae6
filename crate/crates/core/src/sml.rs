//! Decomposition of `M = {n : ||a_n|| < theta^n}` for exponential
//! polynomials `a_n = sum Q_i(n) alpha_i^n` into a finite set and
//! arithmetic progressions.
//!
//! Each `Q_i` has coefficients in `Q(alpha_i)`, written as rational
//! polynomials in `alpha_i`. After reduction modulo the torsion exponent
//! `m`, every residue class is completed with the missing conjugate terms;
//! the completed sequence `b` is rational, `D b` is integral, and for
//! large `n` membership in `M` is equivalent to `D b ≡ 0 (mod D)`.

use crate::algebraic::{
    alg_abs, compare_modulus_to_one, interval_to_rationals, is_algebraic_integer, AlgebraicNumber,
};
use crate::characterize::compare_real;
use crate::error::{Error, Result};
use crate::field::{express_in, integrality_denominator, FieldElem, NumberField};
use crate::scalar::cmp_rational;
use crate::structure::{build_partition, torsion_exponent, PowerSumSpec, Term};
use crate::trajectory::{decide_membership, DistanceSample, EvalConfig, Evaluator};
use crate::{IntPolynomial, Poly, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::HashMap;

/// `Q(n) alpha^n` with `Q(n) = sum_k n^k c_k(alpha)`; `coefficients[k]`
/// lists `c_k` from degree 0 in `alpha`.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceTerm {
    pub alpha: AlgebraicNumber,
    pub coefficients: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecurrenceSpec {
    pub terms: Vec<RecurrenceTerm>,
}

/// A term whose coefficients are elements of `Q(alpha)`.
#[derive(Clone, Debug)]
struct FieldTerm {
    field: NumberField,
    coeffs: Vec<FieldElem>,
}

impl FieldTerm {
    fn new(t: &RecurrenceTerm) -> Self {
        let field = NumberField::new(t.alpha.clone());
        let coeffs = t.coefficients.iter().map(|c| field.from_coeffs(c)).collect();
        let mut ft = FieldTerm { field, coeffs };
        ft.trim();
        ft
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    fn alpha(&self) -> &AlgebraicNumber {
        self.field.generator()
    }

    /// `Q(n)` as a field element.
    fn at(&self, n: u64) -> FieldElem {
        let nn = Rational::from_integer(BigInt::from(n));
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &acc.scale(&nn) + c;
        }
        acc
    }
}

impl RecurrenceSpec {
    pub fn new(terms: Vec<RecurrenceTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a recurrence needs at least one term"));
        }
        for (i, t) in terms.iter().enumerate() {
            if t.alpha.is_zero() {
                return Err(Error::invalid("bases must be nonzero"));
            }
            if FieldTerm::new(t).coeffs.is_empty() {
                return Err(Error::invalid(format!("coefficient polynomial of term {i} is zero")));
            }
            for u in &terms[..i] {
                if u.alpha == t.alpha {
                    return Err(Error::invalid("bases must be pairwise distinct"));
                }
            }
        }
        Ok(RecurrenceSpec { terms })
    }

    /// `Q(alpha)` coefficients of `a_n` as exact algebraic numbers, zero
    /// terms dropped.
    pub fn power_sum_at(&self, n: u64) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        for t in &self.terms {
            let ft = FieldTerm::new(t);
            let q = ft.at(n);
            if q.is_zero() {
                continue;
            }
            out.push(Term { q: ft.field.to_algebraic(&q)?, alpha: t.alpha.clone() });
        }
        Ok(out)
    }
}

/// One conjugate class of the completed sequence.
#[derive(Clone, Debug)]
pub struct CompletedClass {
    pub generator: AlgebraicNumber,
    /// Polynomial coefficients of `Q` over `Q(generator)`.
    pub coefficients: Vec<FieldElem>,
    /// All conjugates of the generator, members first.
    pub conjugates: Vec<AlgebraicNumber>,
    pub member_count: usize,
    field: NumberField,
}

/// The sequence completed with the missing conjugate terms, in the index
/// `t` of one residue class `n = residue + m t`.
#[derive(Clone, Debug)]
pub struct CompletedSequence {
    pub residue: u64,
    pub m: u64,
    pub classes: Vec<CompletedClass>,
    /// Terms with base of modulus below one, in the original index.
    pub small_terms: Vec<RecurrenceTerm>,
    pub d: BigInt,
    pub char_poly: IntPolynomial,
}

impl CompletedSequence {
    /// All terms: `(base, Q coefficients evaluated at that base, adjoined)`.
    pub fn all_terms(&self) -> Vec<(AlgebraicNumber, bool)> {
        self.classes
            .iter()
            .flat_map(|c| c.conjugates.iter().enumerate().map(move |(j, a)| (a.clone(), j >= c.member_count)))
            .collect()
    }

    /// `b_t`, exactly.
    pub fn b(&self, t: u64) -> Rational {
        let nn = Rational::from_integer(BigInt::from(t));
        self.classes.iter().fold(Rational::zero(), |acc, c| {
            let mut q = Poly::zero();
            for k in c.coefficients.iter().rev() {
                q = &q.scale(&nn) + k;
            }
            let x = c.field.pow(&c.field.x(), t);
            acc + c.field.trace(&c.field.mul(&q, &x))
        })
    }

    /// `D b_t`, which must be an integer.
    pub fn scaled(&self, t: u64) -> Result<BigInt> {
        let v = self.b(t) * Rational::from_integer(self.d.clone());
        if !v.is_integer() {
            return Err(Error::Internal(format!("D b_{t} = {v} is not an integer")));
        }
        Ok(v.to_integer())
    }

    /// Modulus of the largest adjoined conjugate, per index `t`.
    pub fn theta0(&self) -> Result<Option<AlgebraicNumber>> {
        let mut best: Option<AlgebraicNumber> = None;
        for c in &self.classes {
            for b in &c.conjugates[c.member_count..] {
                let a = alg_abs(b)?;
                best = match best {
                    Some(x) if compare_real(&x, &a) != Ordering::Less => Some(x),
                    _ => Some(a),
                };
            }
        }
        Ok(best)
    }
}

/// Complete a reduced spec whose bases satisfy the structural properties
/// and have modulus at least one.
pub fn complete_sequence(spec: &RecurrenceSpec) -> Result<CompletedSequence> {
    complete_residue(&spec.terms, &[], 0, 1)
}

fn complete_residue(
    terms: &[RecurrenceTerm],
    small: &[RecurrenceTerm],
    residue: u64,
    m: u64,
) -> Result<CompletedSequence> {
    let mut classes = Vec::new();
    let mut d = BigInt::one();
    let mut char_poly: IntPolynomial = Poly::one();
    if !terms.is_empty() {
        let fts: Vec<FieldTerm> = terms.iter().map(FieldTerm::new).collect();
        let unit = PowerSumSpec::unit_coefficients(terms.iter().map(|t| t.alpha.clone()).collect())?;
        let partition = build_partition(&unit)?;
        for class in &partition.classes {
            let lead = &fts[class.members[0].0];
            // conjugate members must carry conjugate coefficients
            for (idx, _) in &class.members[1..] {
                if fts[*idx].coeffs != lead.coeffs {
                    return Err(Error::structure(format!(
                        "terms {} and {idx} have conjugate bases but non-conjugate coefficients",
                        class.members[0].0
                    )));
                }
            }
            for c in &lead.coeffs {
                d = d.lcm(&integrality_denominator(&lead.field.to_algebraic(c)?));
            }
            let mult = lead.coeffs.len() as u32;
            char_poly = &char_poly * &lead.alpha().minpoly().pow(mult);
            classes.push(CompletedClass {
                generator: lead.alpha().clone(),
                coefficients: lead.coeffs.clone(),
                conjugates: class.full_conjugates.clone(),
                member_count: class.class_size,
                field: lead.field.clone(),
            });
        }
    }
    Ok(CompletedSequence { residue, m, classes, small_terms: small.to_vec(), d, char_poly })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduePattern {
    pub preperiod: u64,
    pub period: u64,
    /// Residues `t mod period` (for `t >= preperiod`) with `D b_t ≡ 0 (mod D)`.
    pub zero_residues: Vec<u64>,
}

const MAX_PATTERN_STEPS: usize = 1 << 20;

/// Eventual period of `D b_t mod D` from the integer recurrence given by
/// the characteristic polynomial.
pub fn residue_pattern(cs: &CompletedSequence) -> Result<ResiduePattern> {
    if cs.d.is_one() {
        return Ok(ResiduePattern { preperiod: 0, period: 1, zero_residues: vec![0] });
    }
    let cp = &cs.char_poly;
    let l = cp.deg();
    if !cp.leading().is_some_and(|c| c.is_one()) {
        return Err(Error::Internal("characteristic polynomial is not monic".into()));
    }
    let dd = &cs.d;
    let exact: Vec<BigInt> = (0..(2 * l + 6) as u64).map(|t| cs.scaled(t)).collect::<Result<_>>()?;
    // the recurrence must annihilate the exact values
    for s in 0..exact.len() - l {
        let v: BigInt = (0..=l).map(|i| &cp.coeffs()[i] * &exact[s + i]).sum();
        if !v.is_zero() {
            return Err(Error::Internal("characteristic polynomial does not annihilate the sequence".into()));
        }
    }
    let mut seq: Vec<BigInt> = exact[..l].iter().map(|v| v.mod_floor(dd)).collect();
    let mut seen: HashMap<Vec<BigInt>, usize> = HashMap::new();
    let (pre, period) = loop {
        let n = seq.len() - l;
        let state = seq[n..].to_vec();
        if let Some(&first) = seen.get(&state) {
            break (first, n - first);
        }
        if n > MAX_PATTERN_STEPS {
            return Err(Error::Internal("period of the residue sequence is too long".into()));
        }
        seen.insert(state, n);
        let next: BigInt = -(0..l).map(|i| &cp.coeffs()[i] * &seq[n + i]).sum::<BigInt>();
        seq.push(next.mod_floor(dd));
    };
    // one more full period, evaluated directly
    for t in pre + period..pre + 2 * period {
        if cs.scaled(t as u64)?.mod_floor(dd) != seq[t - period] {
            return Err(Error::Internal("residue pattern failed direct verification".into()));
        }
    }
    let zero_residues = (pre..pre + period).filter(|&t| seq[t].is_zero()).map(|t| (t % period) as u64).collect::<Vec<_>>();
    let mut zero_residues = zero_residues;
    zero_residues.sort_unstable();
    Ok(ResiduePattern { preperiod: pre as u64, period: period as u64, zero_residues })
}

/// Nonnegative polynomial bound `P(x) >= |Q(x)|` and a rate bound for one
/// error term.
struct ErrorTerm {
    poly: Vec<Rational>,
    rate: Rational,
    /// Reduced-index term (`x = t`) or original-index term (`x = n`).
    reduced: bool,
}

impl ErrorTerm {
    fn value(&self, x: u64) -> Rational {
        let xr = Rational::from_integer(BigInt::from(x));
        let p = self.poly.iter().rev().fold(Rational::zero(), |acc, c| acc * &xr + c);
        p * num_traits::pow(self.rate.clone(), x as usize)
    }
}

/// Smallest `x >= 1` with `((x + s) / x)^k rho^s < 1`, after which
/// `P(x) rho^x` decreases along steps of `s`.
fn crossover(k: usize, rho: &Rational, s: u64) -> u64 {
    if k == 0 {
        return 1;
    }
    let ok = |x: u64| {
        let r = Rational::new(BigInt::from(x + s), BigInt::from(x));
        num_traits::pow(r, k) * num_traits::pow(rho.clone(), s as usize) < Rational::one()
    };
    let mut hi = 1u64;
    while !ok(hi) {
        hi *= 2;
    }
    let mut lo = hi / 2;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn abs_upper(e: &crate::interval::CInterval) -> Rational {
    interval_to_rationals(&e.abs()).1
}

fn error_terms(cs: &CompletedSequence, theta_m: &Rational, theta: &Rational) -> Result<Vec<ErrorTerm>> {
    let mut out = Vec::new();
    for c in &cs.classes {
        for b in &c.conjugates[c.member_count..] {
            let poly = c.coefficients.iter().map(|k| abs_upper(&c.field.enclose(k, b, 64))).collect();
            let rate = rate_below(b, theta_m)?;
            out.push(ErrorTerm { poly, rate, reduced: true });
        }
    }
    for s in &cs.small_terms {
        let ft = FieldTerm::new(s);
        let poly = ft.coeffs.iter().map(|k| abs_upper(&ft.field.enclose(k, ft.alpha(), 64))).collect();
        out.push(ErrorTerm { poly, rate: rate_below(ft.alpha(), theta)?, reduced: false });
    }
    Ok(out)
}

/// Rational upper bound for `|b|` strictly below `limit`.
fn rate_below(b: &AlgebraicNumber, limit: &Rational) -> Result<Rational> {
    let mut bits = 32;
    while bits <= 4096 {
        let hi = interval_to_rationals(&b.abs_enclosure(bits)).1;
        if cmp_rational(&hi, limit).is_lt() {
            return Ok(hi);
        }
        bits *= 2;
    }
    Err(Error::invalid("theta is not separated from the adjoined conjugates"))
}

/// Smallest `N` such that for every `n >= N` in the residue class of
/// `cs`, the adjoined and small terms sum to less than `theta^n` and, when
/// `D > 1`, to less than `1/D - theta^n`.
pub fn effective_thresholds(cs: &CompletedSequence, theta_tilde: &Rational) -> Result<u64> {
    check_theta(cs, theta_tilde)?;
    let theta_m = num_traits::pow(theta_tilde.clone(), cs.m as usize);
    let terms = error_terms(cs, &theta_m, theta_tilde)?;
    let inv_d = Rational::new(BigInt::one(), cs.d.clone());
    let need_b = !cs.d.is_one();
    // beyond n1 every normalized term decreases along the class
    let mut n1 = 1u64;
    for t in &terms {
        let k = t.poly.len().saturating_sub(1);
        let (step, rho_a) = if t.reduced { (1, &t.rate / &theta_m) } else { (cs.m, &t.rate / theta_tilde) };
        let xa = crossover(k, &rho_a, step);
        let xb = crossover(k, &t.rate, step);
        let x = xa.max(xb);
        n1 = n1.max(if t.reduced { cs.residue + cs.m * x } else { x });
    }
    let mut last_fail = 0u64;
    let mut t_idx = if cs.residue == 0 { 1 } else { 0 };
    loop {
        let n = cs.residue + cs.m * t_idx;
        let e: Rational = terms.iter().map(|t| t.value(if t.reduced { t_idx } else { n })).sum();
        let tp = num_traits::pow(theta_tilde.clone(), n as usize);
        let ok = cmp_rational(&e, &tp).is_lt() && (!need_b || cmp_rational(&(&e + &tp), &inv_d).is_lt());
        if !ok {
            last_fail = n;
        } else if n >= n1 {
            return Ok(last_fail + 1);
        }
        t_idx += 1;
    }
}

fn check_theta(cs: &CompletedSequence, theta_tilde: &Rational) -> Result<()> {
    if !(theta_tilde.is_positive() && theta_tilde < &Rational::one()) {
        return Err(Error::invalid("theta must lie in (0, 1)"));
    }
    let theta_m = AlgebraicNumber::from_rational(num_traits::pow(theta_tilde.clone(), cs.m as usize));
    if let Some(t0) = cs.theta0()? {
        if compare_real(&theta_m, &t0) != Ordering::Greater {
            return Err(Error::invalid(format!("theta must exceed theta0 = {}", t0)));
        }
    }
    let th = AlgebraicNumber::from_rational(theta_tilde.clone());
    for s in &cs.small_terms {
        if compare_real(&th, &alg_abs(&s.alpha)?) != Ordering::Greater {
            return Err(Error::invalid("theta must exceed the modulus of every small base"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Progression {
    pub residue: u64,
    pub modulus: u64,
}

/// `n` where the rigorous comparison with `theta^n` stayed undecided.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryCase {
    pub n: u64,
    pub dist_lo: Rational,
    pub dist_hi: Rational,
    pub theta_power: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub theta_tilde: Rational,
    pub threshold: u64,
    /// Members of `M` below the threshold.
    pub exceptional: Vec<u64>,
    /// From the threshold on, `n` is in `M` exactly when it lies in one of
    /// these classes.
    pub progressions: Vec<Progression>,
    /// Original-index start and length of the periodic part.
    pub preperiod: u64,
    pub period: u64,
    pub exponent_m: u64,
    pub certified: bool,
    pub scan_limit: u64,
    /// Indices in `[threshold, scan_limit]` where direct evaluation
    /// disagrees with the progressions.
    pub mismatches: Vec<u64>,
    pub boundary: Vec<BoundaryCase>,
    /// Why the structural conditions fail, when not certified.
    pub note: Option<String>,
}

impl Decomposition {
    pub fn predicts(&self, n: u64) -> bool {
        self.progressions.iter().any(|p| n % p.modulus == p.residue)
    }
}

/// Coarsest modulus describing the residue set.
pub fn simplify_progressions(residues: &[u64], modulus: u64) -> Vec<Progression> {
    if residues.is_empty() {
        return Vec::new();
    }
    let set: std::collections::BTreeSet<u64> = residues.iter().copied().collect();
    for m in 1..=modulus {
        if !modulus.is_multiple_of(m) {
            continue;
        }
        let reduced: std::collections::BTreeSet<u64> = set.iter().map(|r| r % m).collect();
        let expanded: std::collections::BTreeSet<u64> =
            (0..modulus).filter(|n| reduced.contains(&(n % m))).collect();
        if expanded == set {
            return reduced.into_iter().map(|residue| Progression { residue, modulus: m }).collect();
        }
    }
    unreachable!("the full modulus always describes the set")
}

/// Terms of the residue class `n = r + m t`, as a spec in `t` over
/// `Q(alpha^m)`; `None` when a coefficient leaves that field.
fn reduce_terms(terms: &[RecurrenceTerm], m: u64, r: u64) -> Result<Option<Vec<RecurrenceTerm>>> {
    let mut groups: Vec<(AlgebraicNumber, NumberField, Vec<FieldElem>)> = Vec::new();
    for t in terms {
        let ft = FieldTerm::new(t);
        let k = &ft.field;
        let alpha_r = k.pow(&k.x(), r);
        let deg = ft.coeffs.len();
        // Q(r + m t) alpha^r = sum_j t^j e_j
        let mut e: Vec<FieldElem> = vec![Poly::zero(); deg];
        for (kk, c) in ft.coeffs.iter().enumerate() {
            let c = k.mul(c, &alpha_r);
            for (j, slot) in e.iter_mut().enumerate().take(kk + 1) {
                let coef = binomial(kk, j) * num_traits::pow(BigInt::from(r), kk - j) * num_traits::pow(BigInt::from(m), j);
                *slot = &*slot + &c.scale(&Rational::from_integer(coef));
            }
        }
        let am = crate::algebraic::alg_pow(ft.alpha(), m);
        let target = match groups.iter().position(|g| g.0 == am) {
            Some(i) => i,
            None => {
                let f = NumberField::new(am.clone());
                groups.push((am.clone(), f, Vec::new()));
                groups.len() - 1
            }
        };
        let mut mapped = Vec::with_capacity(e.len());
        for ej in &e {
            if m == 1 {
                mapped.push(ej.clone());
                continue;
            }
            let v = k.to_algebraic(ej)?;
            match express_in(&v, &groups[target].1)? {
                Some(x) => mapped.push(x),
                None => return Ok(None),
            }
        }
        let g = &mut groups[target].2;
        if g.len() < mapped.len() {
            g.resize(mapped.len(), Poly::zero());
        }
        for (j, x) in mapped.into_iter().enumerate() {
            g[j] = &g[j] + &x;
        }
    }
    let mut out = Vec::new();
    for (alpha, _, mut coeffs) in groups {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if !coeffs.is_empty() {
            out.push(RecurrenceTerm { alpha, coefficients: coeffs.iter().map(|c| c.coeffs().to_vec()).collect() });
        }
    }
    Ok(Some(out))
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Structural conditions for one residue class, or the reason they fail.
fn residue_sequence(
    big: &[RecurrenceTerm],
    small: &[RecurrenceTerm],
    m: u64,
    r: u64,
) -> Result<std::result::Result<CompletedSequence, String>> {
    let Some(reduced) = reduce_terms(big, m, r)? else {
        return Ok(Err(format!("residue {r}: a coefficient is not in the field of its base")));
    };
    for t in &reduced {
        if !is_algebraic_integer(&t.alpha) {
            return Ok(Err(format!("residue {r}: base {} is not an algebraic integer", t.alpha)));
        }
    }
    let cs = match complete_residue(&reduced, small, r, m) {
        Ok(cs) => cs,
        Err(Error::Structure(s)) => return Ok(Err(format!("residue {r}: {s}"))),
        Err(e) => return Err(e),
    };
    for c in &cs.classes {
        for b in &c.conjugates[c.member_count..] {
            if compare_modulus_to_one(b)? != Ordering::Less {
                return Ok(Err(format!("residue {r}: adjoined conjugate {b} has modulus at least one")));
            }
        }
    }
    Ok(Ok(cs))
}

/// `a_n` exactly when every base comes with all of its conjugates and
/// one shared coefficient polynomial, so the sum is a sum of traces.
fn trace_value(spec: &RecurrenceSpec, n: u64) -> Option<Rational> {
    let mut total = Rational::zero();
    let mut done = vec![false; spec.terms.len()];
    for i in 0..spec.terms.len() {
        if done[i] {
            continue;
        }
        let ft = FieldTerm::new(&spec.terms[i]);
        let group: Vec<usize> =
            (i..spec.terms.len()).filter(|&j| spec.terms[j].alpha.minpoly() == ft.alpha().minpoly()).collect();
        if group.len() != ft.field.degree() {
            return None;
        }
        for &j in &group {
            if FieldTerm::new(&spec.terms[j]).coeffs != ft.coeffs {
                return None;
            }
            done[j] = true;
        }
        let x = ft.field.pow(&ft.field.x(), n);
        total += ft.field.trace(&ft.field.mul(&ft.at(n), &x));
    }
    Some(total)
}

/// Rigorous membership of `n` in `M_theta` for the original sequence.
pub fn membership(spec: &RecurrenceSpec, n: u64, theta: &Rational, config: EvalConfig) -> Result<(DistanceSample, Option<bool>)> {
    let tp = num_traits::pow(theta.clone(), n as usize);
    if let Some(x) = trace_value(spec, n) {
        let s = DistanceSample::exact(n, &x);
        let inside = cmp_rational(&s.dist_hi, &tp).is_lt();
        return Ok((s, Some(inside)));
    }
    let terms = spec.power_sum_at(n)?;
    if terms.is_empty() {
        let zero = DistanceSample { n, p: BigInt::zero(), dist_lo: Rational::zero(), dist_hi: Rational::zero(), decided: true };
        return Ok((zero, Some(tp.is_positive())));
    }
    let ev = Evaluator::new(&PowerSumSpec::new(terms)?, config);
    decide_membership(&ev, n, &tp, config)
}

pub fn decompose(spec: &RecurrenceSpec, theta_tilde: &Rational, scan_limit: u64, config: EvalConfig) -> Result<Decomposition> {
    if !(theta_tilde.is_positive() && theta_tilde < &Rational::one()) {
        return Err(Error::invalid("theta must lie in (0, 1)"));
    }
    if scan_limit == 0 {
        return Err(Error::invalid("scan limit must be positive"));
    }
    let mut big = Vec::new();
    let mut small = Vec::new();
    for t in &spec.terms {
        if compare_modulus_to_one(&t.alpha)? == Ordering::Less {
            small.push(t.clone());
        } else {
            big.push(t.clone());
        }
    }
    let m = if big.is_empty() {
        1
    } else {
        torsion_exponent(&big.iter().map(|t| t.alpha.clone()).collect::<Vec<_>>())?
    };
    let mut sequences = Vec::new();
    let mut note = None;
    for r in 0..m {
        match residue_sequence(&big, &small, m, r)? {
            Ok(cs) => sequences.push(cs),
            Err(why) => {
                note = Some(why);
                break;
            }
        }
    }

    let mut threshold = 1u64;
    let mut preperiod = 0u64;
    let mut progressions = Vec::new();
    let mut period = 1u64;
    let certified_structure = note.is_none();
    if certified_structure {
        let mut patterns = Vec::new();
        for cs in &sequences {
            threshold = threshold.max(effective_thresholds(cs, theta_tilde)?);
            let p = residue_pattern(cs)?;
            if p.preperiod > 0 {
                preperiod = preperiod.max(cs.residue + m * p.preperiod);
            }
            patterns.push(p);
        }
        let lcm = patterns.iter().fold(1u64, |acc, p| acc.lcm(&p.period));
        period = m * lcm;
        let mut residues = Vec::new();
        for (cs, p) in sequences.iter().zip(&patterns) {
            for k in 0..lcm {
                if p.zero_residues.contains(&(k % p.period)) {
                    residues.push(cs.residue + m * k);
                }
            }
        }
        residues.sort_unstable();
        progressions = simplify_progressions(&residues, period);
        threshold = threshold.max(preperiod).max(1);
        if scan_limit + 1 < threshold {
            return Err(Error::invalid(format!("scan limit {scan_limit} is below the threshold {threshold}")));
        }
    }

    let upper = if certified_structure { scan_limit.max(threshold - 1) } else { scan_limit };
    let rows: Vec<(u64, DistanceSample, Option<bool>)> = (1..=upper)
        .into_par_iter()
        .map(|n| membership(spec, n, theta_tilde, config).map(|(s, v)| (n, s, v)))
        .collect::<Result<_>>()?;
    let mut exceptional = Vec::new();
    let mut mismatches = Vec::new();
    let mut boundary = Vec::new();
    let limit = if certified_structure { threshold } else { upper + 1 };
    let mut dec = Decomposition {
        theta_tilde: theta_tilde.clone(),
        threshold: if certified_structure { threshold } else { upper + 1 },
        exceptional: Vec::new(),
        progressions,
        preperiod,
        period,
        exponent_m: m,
        certified: false,
        scan_limit,
        mismatches: Vec::new(),
        boundary: Vec::new(),
        note,
    };
    for (n, s, v) in rows {
        match v {
            None => boundary.push(BoundaryCase {
                n,
                dist_lo: s.dist_lo,
                dist_hi: s.dist_hi,
                theta_power: num_traits::pow(theta_tilde.clone(), n as usize),
            }),
            Some(inside) => {
                if n < limit {
                    if inside {
                        exceptional.push(n);
                    }
                } else if inside != dec.predicts(n) {
                    mismatches.push(n);
                }
            }
        }
    }
    dec.certified = certified_structure && mismatches.is_empty() && boundary.iter().all(|b| b.n >= limit);
    dec.exceptional = exceptional;
    dec.mismatches = mismatches;
    dec.boundary = boundary;
    Ok(dec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::int_poly;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }
    fn phi() -> AlgebraicNumber {
        AlgebraicNumber::root_near(&int_poly(&[-1, -1, 1]), 1.6, 0.0).unwrap()
    }
    fn term(alpha: AlgebraicNumber, coeffs: Vec<Vec<Rational>>) -> RecurrenceSpec {
        RecurrenceSpec::new(vec![RecurrenceTerm { alpha, coefficients: coeffs }]).unwrap()
    }

    #[test]
    fn completion() {
        let cs = complete_sequence(&term(phi(), vec![vec![q(1, 2)]])).unwrap();
        assert_eq!(cs.d, BigInt::from(2));
        assert_eq!(cs.char_poly, int_poly(&[-1, -1, 1]));
        assert_eq!(cs.b(10), q(123, 2));
        let cs = complete_sequence(&term(phi(), vec![vec![q(1, 1)]])).unwrap();
        assert_eq!(cs.d, BigInt::one());
        let cs = complete_sequence(&term(AlgebraicNumber::from_int(2), vec![vec![q(1, 1)]])).unwrap();
        assert_eq!(cs.char_poly, int_poly(&[-2, 1]));
        assert_eq!(cs.b(5), q(32, 1));
    }

    #[test]
    fn patterns() {
        let cs = complete_sequence(&term(phi(), vec![vec![q(1, 2)]])).unwrap();
        assert_eq!(residue_pattern(&cs).unwrap(), ResiduePattern { preperiod: 0, period: 3, zero_residues: vec![0] });
        let one = complete_sequence(&term(phi(), vec![vec![q(1, 1)]])).unwrap();
        assert_eq!(residue_pattern(&one).unwrap().period, 1);
        // n 2^n / 3
        let cs = complete_sequence(&term(AlgebraicNumber::from_int(2), vec![vec![], vec![q(1, 3)]])).unwrap();
        assert_eq!(cs.d, BigInt::from(3));
        assert_eq!(cs.char_poly, int_poly(&[4, -4, 1]));
        assert_eq!(residue_pattern(&cs).unwrap(), ResiduePattern { preperiod: 0, period: 6, zero_residues: vec![0, 3] });
        assert_eq!(simplify_progressions(&[0, 3], 6), vec![Progression { residue: 0, modulus: 3 }]);
    }

    #[test]
    fn thresholds() {
        let cs = complete_sequence(&term(phi(), vec![vec![q(1, 2)]])).unwrap();
        // n = 3: 0.118 < 0.343 and 0.118 < 0.5 - 0.343 = 0.157
        assert_eq!(effective_thresholds(&cs, &q(7, 10)).unwrap(), 3);
        let one = complete_sequence(&term(phi(), vec![vec![q(1, 1)]])).unwrap();
        assert_eq!(effective_thresholds(&one, &q(7, 10)).unwrap(), 1);
        assert!(effective_thresholds(&one, &q(6, 10)).is_err());
        let two = complete_sequence(&term(AlgebraicNumber::from_int(2), vec![vec![q(1, 1)]])).unwrap();
        assert_eq!(effective_thresholds(&two, &q(1, 10)).unwrap(), 1);
    }

    #[test]
    fn half_golden_decomposition() {
        let d = decompose(&term(phi(), vec![vec![q(1, 2)]]), &q(7, 10), 60, EvalConfig::default()).unwrap();
        assert!(d.certified);
        assert_eq!(d.exceptional, vec![1, 2]);
        assert_eq!(d.progressions, vec![Progression { residue: 0, modulus: 3 }]);
        assert!(d.mismatches.is_empty());
    }

    #[test]
    fn golden_and_rational() {
        let d = decompose(&term(phi(), vec![vec![q(1, 1)]]), &q(7, 10), 40, EvalConfig::default()).unwrap();
        assert!(d.certified);
        assert!(d.exceptional.is_empty());
        assert_eq!(d.progressions, vec![Progression { residue: 0, modulus: 1 }]);
        let r = decompose(&term(AlgebraicNumber::from_rational(q(3, 2)), vec![vec![q(1, 1)]]), &q(9, 10), 40, EvalConfig::default())
            .unwrap();
        assert!(!r.certified);
        assert!(r.progressions.is_empty());
        assert!(r.note.is_some());
    }

    #[test]
    fn residue_classes() {
        // a_n = sqrt2^(n+1) / 2: for even n the coefficient sqrt2 / 2 leaves Q
        let s2 = AlgebraicNumber::root_near(&int_poly(&[-2, 0, 1]), 1.4, 0.0).unwrap();
        let d = decompose(&term(s2, vec![vec![q(0, 1), q(1, 2)]]), &q(1, 2), 30, EvalConfig::default()).unwrap();
        assert_eq!(d.exponent_m, 2);
        assert!(!d.certified);
        assert!(d.note.is_some());

        // phi^n + (-phi)^n is 2 phi^n for even n and 0 for odd n
        let neg = crate::algebraic::alg_neg(&phi());
        let spec = RecurrenceSpec::new(vec![
            RecurrenceTerm { alpha: phi(), coefficients: vec![vec![q(1, 1)]] },
            RecurrenceTerm { alpha: neg, coefficients: vec![vec![q(1, 1)]] },
        ])
        .unwrap();
        let d = decompose(&spec, &q(7, 10), 40, EvalConfig::default()).unwrap();
        assert_eq!(d.exponent_m, 2);
        assert!(d.certified, "{d:?}");
        assert_eq!(d.progressions, vec![Progression { residue: 0, modulus: 1 }]);
        assert!(d.threshold > 1);
        for n in 1..d.threshold {
            let a = if n % 2 == 0 { 2.0 * 1.618_033_988_749_895_f64.powi(n as i32) } else { 0.0 };
            let inside = (a - a.round()).abs() < 0.7f64.powi(n as i32);
            assert_eq!(d.exceptional.contains(&n), inside, "n = {n}");
        }
    }
}
