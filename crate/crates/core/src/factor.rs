//! Factorization over the rationals.
//!
//! After a squarefree decomposition each squarefree part is split by
//! searching conjugation-closed subsets of its certified roots: a subset is
//! the root set of a factor exactly when `lc * prod (x - r)` has integer
//! coefficients and its primitive part divides the polynomial. Subsets are
//! tried by increasing degree, so the first divisor found is irreducible.

use crate::error::{Error, Result};
use crate::interval::{CInterval, Interval};
use crate::intpoly::{exact_div, primitive_part, squarefree_decomposition};
use crate::modp::admissible_degrees;
use crate::roots::{is_real_box, isolate, refine};
use crate::{IntPolynomial, Poly};
use num_bigint::BigInt;

const MAX_BITS: i64 = 1 << 13;

/// Irreducible primitive factors of `p` with multiplicities, sorted by
/// degree then coefficients.
pub fn factor_over_rationals(p: &IntPolynomial) -> Result<Vec<(IntPolynomial, u32)>> {
    if p.is_zero() {
        return Err(Error::InvalidInput("cannot factor the zero polynomial".into()));
    }
    let mut out = Vec::new();
    for (f, mult) in squarefree_decomposition(p) {
        if f.deg() == 0 {
            continue;
        }
        for g in factor_squarefree(&f)? {
            out.push((g, mult));
        }
    }
    out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.coeffs().cmp(b.0.coeffs())));
    Ok(out)
}

/// Whether a squarefree-or-not polynomial of positive degree is irreducible.
pub fn is_irreducible(p: &IntPolynomial) -> Result<bool> {
    if p.deg() == 0 {
        return Ok(false);
    }
    let f = factor_over_rationals(p)?;
    Ok(f.len() == 1 && f[0].1 == 1)
}

/// A group of roots that any rational factor takes or leaves together.
#[derive(Clone)]
struct Unit {
    idx: Vec<usize>,
}

fn pair_units(boxes: &[CInterval]) -> Result<Vec<Unit>> {
    let mut units: Vec<Unit> = Vec::new();
    let mut taken = vec![false; boxes.len()];
    for i in 0..boxes.len() {
        if taken[i] {
            continue;
        }
        taken[i] = true;
        if is_real_box(&boxes[i]) {
            units.push(Unit { idx: vec![i] });
        } else {
            let c = boxes[i].conj();
            let j = (0..boxes.len())
                .find(|&j| !taken[j] && boxes[j] == c)
                .ok_or_else(|| Error::Internal("unpaired complex root box".into()))?;
            taken[j] = true;
            units.push(Unit { idx: vec![i, j] });
        }
    }
    Ok(units)
}

/// Irreducible factors of a squarefree polynomial.
pub fn factor_squarefree(f: &IntPolynomial) -> Result<Vec<IntPolynomial>> {
    let f = primitive_part(f);
    if f.deg() <= 1 {
        return Ok(vec![f]);
    }
    let boxes = isolate(&f)?;
    let mut units = pair_units(&boxes)?;
    let mut search = Search { f: f.clone(), boxes, bits: 64 };
    let mut rest = f;
    let mut factors = Vec::new();
    loop {
        let n = rest.deg();
        if n <= 1 {
            if n == 1 {
                factors.push(rest);
            }
            break;
        }
        match search.smallest_factor(&rest, &units)? {
            Some((g, used)) => {
                rest = exact_div(&rest, &g).ok_or_else(|| Error::Internal("factor does not divide".into()))?;
                units = units.into_iter().enumerate().filter(|(k, _)| !used.contains(k)).map(|(_, u)| u).collect();
                factors.push(g);
            }
            None => {
                factors.push(rest);
                break;
            }
        }
    }
    Ok(factors)
}

/// The irreducible factor of the squarefree polynomial `f` vanishing at the
/// root isolated by `boxes[target]`, where `boxes` is the output of
/// [`isolate`] for `f`.
pub fn factor_with_root(f: &IntPolynomial, boxes: &[CInterval], target: usize) -> Result<IntPolynomial> {
    let f = primitive_part(f);
    let mut units = pair_units(boxes)?;
    let mut search = Search { f: f.clone(), boxes: boxes.to_vec(), bits: 64 };
    let mut rest = f;
    // split off smallest factors until one of them holds the target
    while rest.deg() > 1 {
        let Some((g, used)) = search.smallest_factor(&rest, &units)? else { break };
        if used.iter().any(|&u| units[u].idx.contains(&target)) {
            return Ok(g);
        }
        rest = exact_div(&rest, &g).ok_or_else(|| Error::Internal("factor does not divide".into()))?;
        units = units.into_iter().enumerate().filter(|(k, _)| !used.contains(k)).map(|(_, u)| u).collect();
    }
    Ok(rest)
}

struct Search {
    f: IntPolynomial,
    boxes: Vec<CInterval>,
    bits: i64,
}

enum Candidate {
    Rejected,
    Unsure,
    Integer(IntPolynomial),
}

impl Search {
    fn sharpen(&mut self) -> Result<()> {
        if self.bits >= MAX_BITS {
            return Err(Error::Internal("factor search needs excessive precision".into()));
        }
        self.bits *= 2;
        let f = &self.f;
        let bits = self.bits;
        self.boxes = self.boxes.iter().map(|b| refine(f, b, bits)).collect::<Result<_>>()?;
        Ok(())
    }

    /// Smallest-degree proper factor of `rest`; degrees above half are never
    /// needed since the cofactor would be smaller.
    fn smallest_factor(&mut self, rest: &IntPolynomial, units: &[Unit]) -> Result<Option<(IntPolynomial, Vec<usize>)>> {
        let n = rest.deg();
        let lc = rest.leading().unwrap().clone();
        let allowed = admissible_degrees(rest);
        for k in 1..=n / 2 {
            if !allowed[k] {
                continue;
            }
            let mut chosen = Vec::new();
            if let Some(hit) = self.subsets(rest, &lc, units, k, 0, &mut chosen)? {
                return Ok(Some(hit));
            }
        }
        Ok(None)
    }

    fn subsets(
        &mut self,
        rest: &IntPolynomial,
        lc: &BigInt,
        units: &[Unit],
        remaining: usize,
        start: usize,
        chosen: &mut Vec<usize>,
    ) -> Result<Option<(IntPolynomial, Vec<usize>)>> {
        if remaining == 0 {
            return self.try_subset(rest, lc, units, chosen);
        }
        for u in start..units.len() {
            let w = units[u].idx.len();
            if w > remaining {
                continue;
            }
            chosen.push(u);
            let r = self.subsets(rest, lc, units, remaining - w, u + 1, chosen)?;
            chosen.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }

    fn try_subset(
        &mut self,
        rest: &IntPolynomial,
        lc: &BigInt,
        units: &[Unit],
        chosen: &[usize],
    ) -> Result<Option<(IntPolynomial, Vec<usize>)>> {
        let roots: Vec<usize> = chosen.iter().flat_map(|&u| units[u].idx.iter().copied()).collect();
        loop {
            match self.candidate(lc, &roots) {
                Candidate::Rejected => return Ok(None),
                Candidate::Unsure => self.sharpen()?,
                Candidate::Integer(g) => {
                    let g = primitive_part(&g);
                    return Ok(exact_div(rest, &g).map(|_| (g, chosen.to_vec())));
                }
            }
        }
    }

    fn candidate(&self, lc: &BigInt, roots: &[usize]) -> Candidate {
        let prec = (self.bits + 64) as u32;
        let lci = Interval::from_int(lc.clone(), prec);
        // cheap trace filter before expanding the product
        let mut trace = Interval::zero(prec);
        for &i in roots {
            trace = &trace + &self.boxes[i].re;
        }
        match integers_in(&(&lci * &trace)) {
            0 => return Candidate::Rejected,
            1 => {}
            _ => return Candidate::Unsure,
        }
        let mut prod: Vec<CInterval> = vec![CInterval::from_int(lc.clone(), prec)];
        for &i in roots {
            let r = &self.boxes[i];
            let mut next = vec![CInterval::from_int(0, prec); prod.len() + 1];
            for (j, c) in prod.iter().enumerate() {
                next[j + 1] = &next[j + 1] + c;
                next[j] = &next[j] - &(c * r);
            }
            prod = next;
        }
        let mut coeffs = Vec::with_capacity(prod.len());
        for c in &prod {
            match integers_in(&c.re) {
                0 => return Candidate::Rejected,
                1 => coeffs.push(c.re.lo().ceil_int()),
                _ => return Candidate::Unsure,
            }
        }
        Candidate::Integer(Poly::new(coeffs))
    }
}

/// Number of integers in the interval, capped at 2.
fn integers_in(x: &Interval) -> u8 {
    let lo = x.lo().ceil_int();
    let hi = x.hi().floor_int();
    if hi < lo {
        0
    } else if hi == lo {
        1
    } else {
        2
    }
}
