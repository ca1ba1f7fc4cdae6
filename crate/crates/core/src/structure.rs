//! Structure of power-sum tuples: non-degeneracy, the relation "some
//! conjugate differs by a root of unity", the torsion-clearing exponent,
//! the collapse of terms that become equal after raising to that exponent,
//! and the partition into conjugate classes.
//!
//! Indices in witnesses and records are 0-based positions in the input.

use crate::algebraic::{
    alg_arith, alg_equals, alg_pow, compare_modulus_to_one, conjugates_of, root_of_unity_order, AlgebraicNumber,
    ArithOp,
};
use crate::error::{Error, Result};
use num_integer::Integer;
use std::cmp::Ordering;

/// One term `q * alpha^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub q: AlgebraicNumber,
    pub alpha: AlgebraicNumber,
}

/// The tuple `(q_1, ..., q_k; alpha_1, ..., alpha_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSumSpec {
    pub terms: Vec<Term>,
}

impl PowerSumSpec {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::invalid("a power sum needs at least one term"));
        }
        if terms.iter().any(|t| t.q.is_zero() || t.alpha.is_zero()) {
            return Err(Error::invalid("coefficients and bases must be nonzero"));
        }
        Ok(PowerSumSpec { terms })
    }

    /// All coefficients equal to one.
    pub fn unit_coefficients(alphas: Vec<AlgebraicNumber>) -> Result<Self> {
        PowerSumSpec::new(alphas.into_iter().map(|alpha| Term { q: AlgebraicNumber::one(), alpha }).collect())
    }

    pub fn alphas(&self) -> Vec<AlgebraicNumber> {
        self.terms.iter().map(|t| t.alpha.clone()).collect()
    }
}

/// Order of `a / b` as a root of unity, if it is one.
pub fn torsion_ratio(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<Option<u64>> {
    if alg_equals(a, b) {
        return Ok(Some(1));
    }
    // roots of unity have modulus one, so the moduli must agree
    let (ma, mb) = (a.abs_enclosure(24), b.abs_enclosure(24));
    if !ma.intersects(&mb) {
        return Ok(None);
    }
    let r = alg_arith(a, b, ArithOp::Div)?;
    root_of_unity_order(&r)
}

fn nonzero(alphas: &[AlgebraicNumber]) -> Result<()> {
    if alphas.iter().any(|a| a.is_zero()) {
        return Err(Error::invalid("zero entry"));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Degeneracy {
    pub i: usize,
    pub j: usize,
    pub order: u64,
}

/// `Ok(None)` when no ratio of distinct entries is a root of unity,
/// otherwise the first offending pair.
pub fn check_nondegenerate(alphas: &[AlgebraicNumber]) -> Result<Option<Degeneracy>> {
    nonzero(alphas)?;
    for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            if let Some(order) = torsion_ratio(&alphas[i], &alphas[j])? {
                return Ok(Some(Degeneracy { i, j, order }));
            }
        }
    }
    Ok(None)
}

/// Whether some conjugate of `b` differs from `a` by a root of unity.
pub fn related(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<bool> {
    for c in conjugates_of(b) {
        if torsion_ratio(a, &c)?.is_some() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Classes of the relation, each sorted, ordered by smallest member.
pub fn equiv_classes(alphas: &[AlgebraicNumber]) -> Result<Vec<Vec<usize>>> {
    nonzero(alphas)?;
    let n = alphas.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if find(&mut parent, i) != find(&mut parent, j) && related(&alphas[i], &alphas[j])? {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[slot[r]].push(i);
    }
    Ok(classes)
}

/// Distinct minimal polynomials' full conjugate sets.
fn all_conjugates(alphas: &[AlgebraicNumber]) -> Vec<AlgebraicNumber> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for a in alphas {
        if !seen.contains(a.minpoly()) {
            seen.push(a.minpoly().clone());
            out.extend(conjugates_of(a));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct PropertyReport {
    pub p1: bool,
    /// `(index, conjugate ratio order)` of a conjugate pair with torsion ratio.
    pub p1_witness: Option<(usize, u64)>,
    pub p2: bool,
    /// Related entries that are not conjugate.
    pub p2_witness: Option<(usize, usize)>,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.p1 && self.p2
    }
}

/// (P1): no two distinct conjugates of an entry differ by a root of unity.
/// (P2): related entries are conjugate.
pub fn property_check(alphas: &[AlgebraicNumber]) -> Result<PropertyReport> {
    nonzero(alphas)?;
    let mut p1_witness = None;
    'outer: for (i, a) in alphas.iter().enumerate() {
        let c = conjugates_of(a);
        for x in 0..c.len() {
            for y in x + 1..c.len() {
                if let Some(order) = torsion_ratio(&c[x], &c[y])? {
                    p1_witness = Some((i, order));
                    break 'outer;
                }
            }
        }
    }
    let mut p2_witness = None;
    'outer2: for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            if alphas[i].minpoly() != alphas[j].minpoly() && related(&alphas[i], &alphas[j])? {
                p2_witness = Some((i, j));
                break 'outer2;
            }
        }
    }
    Ok(PropertyReport { p1: p1_witness.is_none(), p1_witness, p2: p2_witness.is_none(), p2_witness })
}

fn lcm_upto(n: u64) -> u64 {
    (1..=n).fold(1u64, |acc, k| acc.lcm(&k))
}

/// An exponent `m` such that the `m`-th powers satisfy (P1) and (P2): the
/// lcm of the orders of all torsion ratios among conjugates of the entries,
/// doubled until the properties are verified.
pub fn torsion_exponent(alphas: &[AlgebraicNumber]) -> Result<u64> {
    nonzero(alphas)?;
    let conj = all_conjugates(alphas);
    let mut m = 1u64;
    for x in 0..conj.len() {
        for y in x + 1..conj.len() {
            if let Some(t) = torsion_ratio(&conj[x], &conj[y])? {
                m = m.lcm(&t);
            }
        }
    }
    let maxdeg = alphas.iter().map(|a| a.degree() as u64).max().unwrap_or(1);
    let bound = lcm_upto((2 * maxdeg * maxdeg).min(40));
    loop {
        let powered: Vec<AlgebraicNumber> = alphas.iter().map(|a| alg_pow(a, m)).collect();
        if property_check(&powered)?.holds() {
            return Ok(m);
        }
        if m > bound {
            return Err(Error::structure("no exponent up to the search bound clears torsion"));
        }
        m *= 2;
    }
}

/// Terms of the original spec merged into one reduced term.
#[derive(Clone, Debug, PartialEq)]
pub struct MergeRecord {
    /// Original term indices, the first being the representative.
    pub indices: Vec<usize>,
    /// Order of `alpha_k / alpha_first` as a root of unity, per index.
    pub ratio_orders: Vec<u64>,
    /// The exponent the ratios were raised to (the torsion exponent).
    pub power: u64,
    /// The merged coefficient vanished and the term was dropped.
    pub dropped: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionCertificate {
    pub exponent_m: u64,
    pub residue: u64,
    pub original_terms: PowerSumSpec,
    /// May be empty when every merged coefficient vanishes.
    pub reduced_terms: PowerSumSpec,
    pub collapses: Vec<MergeRecord>,
}

/// Substitute `n = residue + m * t`: the result at `t` equals the original
/// at `n`.
pub fn reduce(spec: &PowerSumSpec, residue: u64) -> Result<ReductionCertificate> {
    let m = torsion_exponent(&spec.alphas())?;
    reduce_with(spec, m, residue)
}

/// [`reduce`] with a known torsion exponent.
pub fn reduce_with(spec: &PowerSumSpec, m: u64, residue: u64) -> Result<ReductionCertificate> {
    if residue >= m {
        return Err(Error::invalid(format!("residue {residue} must be below the exponent {m}")));
    }
    let powered: Vec<AlgebraicNumber> = spec.terms.iter().map(|t| alg_pow(&t.alpha, m)).collect();
    let coeffs: Vec<AlgebraicNumber> = spec
        .terms
        .iter()
        .map(|t| alg_arith(&t.q, &alg_pow(&t.alpha, residue), ArithOp::Mul))
        .collect::<Result<_>>()?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..powered.len() {
        match groups.iter_mut().find(|g| alg_equals(&powered[g[0]], &powered[i])) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    let mut terms = Vec::new();
    let mut collapses = Vec::new();
    for g in groups {
        let mut q = coeffs[g[0]].clone();
        for &i in &g[1..] {
            q = alg_arith(&q, &coeffs[i], ArithOp::Add)?;
        }
        let dropped = q.is_zero();
        if g.len() > 1 || dropped {
            let first = &spec.terms[g[0]].alpha;
            let ratio_orders = g
                .iter()
                .map(|&i| torsion_ratio(&spec.terms[i].alpha, first).map(|o| o.unwrap_or(0)))
                .collect::<Result<_>>()?;
            collapses.push(MergeRecord { indices: g.clone(), ratio_orders, power: m, dropped });
        }
        if !dropped {
            terms.push(Term { q, alpha: powered[g[0]].clone() });
        }
    }
    let reduced = PowerSumSpec { terms };
    let alphas = reduced.alphas();
    if !alphas.is_empty() && (check_nondegenerate(&alphas)?.is_some() || !property_check(&alphas)?.holds()) {
        return Err(Error::Internal("reduced tuple violates the structural properties".into()));
    }
    Ok(ReductionCertificate {
        exponent_m: m,
        residue,
        original_terms: spec.clone(),
        reduced_terms: reduced,
        collapses,
    })
}

/// One conjugate class.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugateClass {
    /// `(input index, term)` for the members.
    pub members: Vec<(usize, Term)>,
    /// All roots of the class minimal polynomial, members first.
    pub full_conjugates: Vec<AlgebraicNumber>,
    pub class_size: usize,
    pub conjugate_count: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassPartition {
    pub classes: Vec<ConjugateClass>,
    pub class_count: usize,
}

/// Group the terms of a non-degenerate spec satisfying (P1) and (P2) into
/// conjugate classes and complete each class with the missing conjugates.
pub fn build_partition(spec: &PowerSumSpec) -> Result<ClassPartition> {
    let alphas = spec.alphas();
    if let Some(d) = check_nondegenerate(&alphas)? {
        return Err(Error::structure(format!(
            "tuple is degenerate: entries {} and {} differ by a root of unity of order {}",
            d.i, d.j, d.order
        )));
    }
    let props = property_check(&alphas)?;
    if !props.p1 {
        return Err(Error::structure("property P1 fails: two conjugates of an entry differ by a root of unity"));
    }
    if !props.p2 {
        return Err(Error::structure("property P2 fails: related entries are not conjugate"));
    }
    let mut classes = Vec::new();
    for idx in equiv_classes(&alphas)? {
        let members: Vec<(usize, Term)> = idx.iter().map(|&i| (i, spec.terms[i].clone())).collect();
        let mut full: Vec<AlgebraicNumber> = members.iter().map(|(_, t)| t.alpha.clone()).collect();
        for c in conjugates_of(&members[0].1.alpha) {
            if !full.iter().any(|f| alg_equals(f, &c)) {
                full.push(c);
            }
        }
        classes.push(ConjugateClass {
            class_size: members.len(),
            conjugate_count: full.len(),
            members,
            full_conjugates: full,
        });
    }
    Ok(ClassPartition { class_count: classes.len(), classes })
}

/// Split off the terms whose base has modulus below one.
pub fn normalize_small_terms(spec: &PowerSumSpec) -> Result<(PowerSumSpec, Vec<Term>)> {
    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for t in &spec.terms {
        if compare_modulus_to_one(&t.alpha)? == Ordering::Less {
            dropped.push(t.clone());
        } else {
            kept.push(t.clone());
        }
    }
    Ok((PowerSumSpec { terms: kept }, dropped))
}
