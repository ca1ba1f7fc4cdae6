//! Exact algebraic numbers: an irreducible primitive integer polynomial and
//! a box isolating one of its roots.
//!
//! Arithmetic builds a polynomial that vanishes at the result (composed sums
//! and products via power sums), keeps the irreducible factor that owns the
//! result, and picks the root by refining operand enclosures until a single
//! candidate box remains.

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::factor::{factor_with_root, is_irreducible};
use crate::interval::{CInterval, Interval};
use crate::intpoly::{
    composed_product, composed_sum, cyclotomic, euler_phi, format_poly, power_poly, primitive_part, scale_roots,
    shift_roots, squarefree_part,
};
use crate::roots::{is_real_box, isolate, refine, unique_root_in};
use crate::{IntPolynomial, Poly, Rational};
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

const MAX_BITS: i64 = 1 << 14;

/// Axis-aligned box with rational corners.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBox {
    pub re_lo: Rational,
    pub re_hi: Rational,
    pub im_lo: Rational,
    pub im_hi: Rational,
}

impl ComplexBox {
    pub fn new(re_lo: Rational, re_hi: Rational, im_lo: Rational, im_hi: Rational) -> Result<Self> {
        if re_lo > re_hi || im_lo > im_hi {
            return Err(Error::InvalidInput("box endpoints out of order".into()));
        }
        Ok(ComplexBox { re_lo, re_hi, im_lo, im_hi })
    }

    pub fn point(re: Rational, im: Rational) -> Self {
        ComplexBox { re_lo: re.clone(), re_hi: re, im_lo: im.clone(), im_hi: im }
    }

    /// Exact conversion of a dyadic box.
    pub fn from_cinterval(b: &CInterval) -> Self {
        ComplexBox {
            re_lo: b.re.lo().to_rational(),
            re_hi: b.re.hi().to_rational(),
            im_lo: b.im.lo().to_rational(),
            im_hi: b.im.hi().to_rational(),
        }
    }

    /// Outward-rounded dyadic enclosure.
    pub fn to_cinterval(&self, prec: u32) -> CInterval {
        CInterval::new(
            Interval::from_rationals(&self.re_lo, &self.re_hi, prec),
            Interval::from_rationals(&self.im_lo, &self.im_hi, prec),
        )
    }

    pub fn contains(&self, re: &Rational, im: &Rational) -> bool {
        &self.re_lo <= re && re <= &self.re_hi && &self.im_lo <= im && im <= &self.im_hi
    }

    pub fn subset_of(&self, o: &ComplexBox) -> bool {
        o.re_lo <= self.re_lo && self.re_hi <= o.re_hi && o.im_lo <= self.im_lo && self.im_hi <= o.im_hi
    }

    pub fn disjoint(&self, o: &ComplexBox) -> bool {
        self.re_hi < o.re_lo || o.re_hi < self.re_lo || self.im_hi < o.im_lo || o.im_hi < self.im_lo
    }

    pub fn midpoint(&self) -> (Rational, Rational) {
        let two = Rational::from_integer(2.into());
        ((&self.re_lo + &self.re_hi) / &two, (&self.im_lo + &self.im_hi) / &two)
    }
}

/// Exact algebraic number.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    minpoly: IntPolynomial,
    root: CInterval,
    value: Option<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn rational_box(r: &Rational, bits: i64) -> CInterval {
    let mag = r.numer().bits() as i64 - r.denom().bits() as i64;
    let prec = (bits + mag.max(0) + 64).clamp(64, u32::MAX as i64 / 4) as u32;
    CInterval::real(Interval::from_rational(r, prec))
}

impl AlgebraicNumber {
    pub fn from_rational(r: Rational) -> Self {
        let minpoly = if r.is_zero() {
            Poly::new(vec![BigInt::zero(), BigInt::one()])
        } else {
            Poly::new(vec![-r.numer().clone(), r.denom().clone()])
        };
        AlgebraicNumber { minpoly, root: rational_box(&r, 0), value: Some(r) }
    }

    pub fn from_int(v: i64) -> Self {
        AlgebraicNumber::from_rational(Rational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        AlgebraicNumber::from_int(0)
    }

    pub fn one() -> Self {
        AlgebraicNumber::from_int(1)
    }

    /// Trusted constructor: `minpoly` irreducible and primitive, `root` an
    /// isolating box of one of its roots.
    pub(crate) fn from_parts(minpoly: IntPolynomial, root: CInterval) -> Self {
        if minpoly.deg() == 1 {
            let c = minpoly.coeffs();
            return AlgebraicNumber::from_rational(Rational::new(-c[0].clone(), c[1].clone()));
        }
        AlgebraicNumber { minpoly, root, value: None }
    }

    /// Validate a user-supplied minimal polynomial and box. The box must
    /// contain exactly one root; it is replaced by the canonical isolating
    /// box of that root.
    pub fn new(minpoly: IntPolynomial, bx: &ComplexBox) -> Result<Self> {
        let p = primitive_part(&minpoly);
        if p.deg() == 0 {
            return Err(Error::InvalidInput("minimal polynomial must have positive degree".into()));
        }
        if !is_irreducible(&p)? {
            return Err(Error::InvalidInput(format!("{} is not irreducible", format_poly(&p))));
        }
        if p.deg() == 1 {
            let c = p.coeffs();
            let r = Rational::new(-c[0].clone(), c[1].clone());
            if !bx.contains(&r, &Rational::zero()) {
                return Err(Error::InvalidInput("box does not contain the rational root".into()));
            }
            return Ok(AlgebraicNumber::from_rational(r));
        }
        let boxes = isolate(&p)?;
        let mut inside = Vec::new();
        for b in &boxes {
            let mut cur = b.clone();
            let mut bits = 8;
            loop {
                let cb = ComplexBox::from_cinterval(&cur);
                if cb.disjoint(bx) {
                    break;
                }
                if cb.subset_of(bx) {
                    inside.push(b.clone());
                    break;
                }
                if bits > 512 {
                    return Err(Error::InvalidInput("a root lies on the boundary of the given box".into()));
                }
                bits *= 2;
                cur = refine(&p, &cur, bits)?;
            }
        }
        match inside.len() {
            1 => Ok(AlgebraicNumber { minpoly: p, root: inside.pop().unwrap(), value: None }),
            0 => Err(Error::InvalidInput("box contains no root of the minimal polynomial".into())),
            _ => Err(Error::InvalidInput("box contains several roots of the minimal polynomial".into())),
        }
    }

    /// All roots of an irreducible polynomial, in conjugate order.
    pub fn roots_of(p: &IntPolynomial) -> Result<Vec<AlgebraicNumber>> {
        let p = primitive_part(p);
        if p.deg() == 0 {
            return Err(Error::InvalidInput("minimal polynomial must have positive degree".into()));
        }
        if !is_irreducible(&p)? {
            return Err(Error::InvalidInput(format!("{} is not irreducible", format_poly(&p))));
        }
        ordered_roots(&p)
    }

    /// The root of the irreducible `p` closest to the approximation `re + im i`.
    pub fn root_near(p: &IntPolynomial, re: f64, im: f64) -> Result<AlgebraicNumber> {
        let target = Complex::new(re, im);
        AlgebraicNumber::roots_of(p)?
            .into_iter()
            .min_by(|a, b| {
                let da = (a.approx() - target).norm();
                let db = (b.approx() - target).norm();
                da.partial_cmp(&db).unwrap_or(Ordering::Equal)
            })
            .ok_or_else(|| Error::Internal("polynomial without roots".into()))
    }

    pub fn minpoly(&self) -> &IntPolynomial {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn root_box(&self) -> ComplexBox {
        match &self.value {
            Some(r) => ComplexBox::point(r.clone(), Rational::zero()),
            None => ComplexBox::from_cinterval(&self.root),
        }
    }

    pub fn rational_value(&self) -> Option<&Rational> {
        self.value.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.value.as_ref().is_some_and(|r| r.is_zero())
    }

    pub fn is_real(&self) -> bool {
        self.value.is_some() || is_real_box(&self.root)
    }

    /// Enclosure of width below `2^-bits`.
    pub fn enclosure(&self, bits: i64) -> CInterval {
        match &self.value {
            Some(r) => rational_box(r, bits),
            None => refine(&self.minpoly, &self.root, bits).expect("refining an isolating box"),
        }
    }

    pub fn abs_enclosure(&self, bits: i64) -> Interval {
        self.enclosure(bits).abs()
    }

    pub fn approx(&self) -> Complex<f64> {
        if let Some(r) = &self.value {
            return Complex::new(r.to_f64().unwrap_or(f64::NAN), 0.0);
        }
        let (re, im) = self.enclosure(60).mid();
        Complex::new(re.to_f64(), im.to_f64())
    }

    /// Sign of a real number (panics on nonreal input).
    pub fn real_sign(&self) -> i32 {
        assert!(self.is_real(), "sign of a nonreal number");
        if let Some(r) = &self.value {
            return if r.is_zero() { 0 } else if r.is_positive() { 1 } else { -1 };
        }
        let mut bits = 8;
        loop {
            let e = self.enclosure(bits).re;
            if e.is_positive() {
                return 1;
            }
            if e.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = &self.value {
            return write!(f, "{r}");
        }
        let z = self.approx();
        if self.is_real() {
            write!(f, "root of {} near {:.10}", format_poly(&self.minpoly), z.re)
        } else {
            let sign = if z.im < 0.0 { '-' } else { '+' };
            write!(f, "root of {} near {:.10} {} {:.10}i", format_poly(&self.minpoly), z.re, sign, z.im.abs())
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, other: &Self) -> bool {
        alg_equals(self, other)
    }
}

/// Index of the unique box in `boxes` (roots of squarefree `f`) that can
/// hold the value enclosed by `enclose(bits)` for large `bits`.
fn locate(f: &IntPolynomial, boxes: &[CInterval], enclose: &dyn Fn(i64) -> Option<CInterval>) -> Result<usize> {
    let mut refined = boxes.to_vec();
    let mut bits = 16;
    while bits <= MAX_BITS {
        if let Some(e) = enclose(bits) {
            let hits: Vec<usize> = (0..refined.len()).filter(|&i| refined[i].intersects(&e)).collect();
            match hits.len() {
                0 => return Err(Error::Internal("value escaped every root box".into())),
                1 => return Ok(hits[0]),
                _ => {
                    for i in hits {
                        refined[i] = refine(f, &refined[i], bits)?;
                    }
                }
            }
        }
        bits *= 2;
    }
    Err(Error::Internal("could not separate candidate roots".into()))
}

/// Build the algebraic number that is a root of `c` and lies in every
/// `enclose(bits)`.
pub(crate) fn select_root(c: &IntPolynomial, enclose: &dyn Fn(i64) -> Option<CInterval>) -> Result<AlgebraicNumber> {
    let f = primitive_part(&squarefree_part(c));
    if f.deg() == 1 {
        return Ok(AlgebraicNumber::from_parts(f, CInterval::from_int(0, 64)));
    }
    let boxes = isolate(&f)?;
    let t = locate(&f, &boxes, enclose)?;
    let g = factor_with_root(&f, &boxes, t)?;
    if g.deg() == 1 {
        return Ok(AlgebraicNumber::from_parts(g, CInterval::from_int(0, 64)));
    }
    if g == f {
        return Ok(AlgebraicNumber::from_parts(g, boxes[t].clone()));
    }
    let gb = isolate(&g)?;
    let j = locate(&g, &gb, enclose)?;
    Ok(AlgebraicNumber::from_parts(g, gb[j].clone()))
}

pub fn alg_neg(a: &AlgebraicNumber) -> AlgebraicNumber {
    if let Some(r) = &a.value {
        return AlgebraicNumber::from_rational(-r.clone());
    }
    AlgebraicNumber { minpoly: primitive_part(&a.minpoly.negate_var()), root: -&a.root, value: None }
}

pub fn alg_inv(a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if a.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if let Some(r) = &a.value {
        return Ok(AlgebraicNumber::from_rational(r.recip()));
    }
    let p = primitive_part(&a.minpoly.reverse());
    let one = CInterval::from_int(1, 64);
    select_irreducible(&p, &|bits| one.div(&a.enclosure(bits)))
}

/// Root of the irreducible `p` in the given enclosures.
fn select_irreducible(p: &IntPolynomial, enclose: &dyn Fn(i64) -> Option<CInterval>) -> Result<AlgebraicNumber> {
    if p.deg() == 1 {
        return Ok(AlgebraicNumber::from_parts(p.clone(), CInterval::from_int(0, 64)));
    }
    let boxes = isolate(p)?;
    let j = locate(p, &boxes, enclose)?;
    Ok(AlgebraicNumber::from_parts(p.clone(), boxes[j].clone()))
}

fn add(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    match (&a.value, &b.value) {
        (Some(x), Some(y)) => Ok(AlgebraicNumber::from_rational(x + y)),
        (None, Some(r)) | (Some(r), None) => {
            let (v, r) = if a.value.is_none() { (a, r) } else { (b, r) };
            if r.is_zero() {
                return Ok(v.clone());
            }
            let p = shift_roots(&v.minpoly, r);
            select_irreducible(&p, &|bits| Some(&v.enclosure(bits) + &rational_box(r, bits)))
        }
        (None, None) => {
            let c = composed_sum(&a.minpoly, &b.minpoly);
            select_root(&c, &|bits| Some(&a.enclosure(bits) + &b.enclosure(bits)))
        }
    }
}

fn mul(a: &AlgebraicNumber, b: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if a.is_zero() || b.is_zero() {
        return Ok(AlgebraicNumber::zero());
    }
    match (&a.value, &b.value) {
        (Some(x), Some(y)) => Ok(AlgebraicNumber::from_rational(x * y)),
        (None, Some(r)) | (Some(r), None) => {
            let v = if a.value.is_none() { a } else { b };
            if r.is_one() {
                return Ok(v.clone());
            }
            let p = scale_roots(&v.minpoly, r);
            select_irreducible(&p, &|bits| Some(&v.enclosure(bits) * &rational_box(r, bits)))
        }
        (None, None) => {
            let c = composed_product(&a.minpoly, &b.minpoly);
            select_root(&c, &|bits| Some(&a.enclosure(bits) * &b.enclosure(bits)))
        }
    }
}

/// `a op b`, exactly.
pub fn alg_arith(a: &AlgebraicNumber, b: &AlgebraicNumber, op: ArithOp) -> Result<AlgebraicNumber> {
    match op {
        ArithOp::Add => add(a, b),
        ArithOp::Sub => add(a, &alg_neg(b)),
        ArithOp::Mul => mul(a, b),
        ArithOp::Div => mul(a, &alg_inv(b)?),
    }
}

/// `a^n`. The `n`-th power is located among the roots of the polynomial
/// whose roots are the `n`-th powers of the conjugates of `a`.
pub fn alg_pow(a: &AlgebraicNumber, n: u64) -> AlgebraicNumber {
    if n == 0 {
        return AlgebraicNumber::one();
    }
    if n == 1 {
        return a.clone();
    }
    if let Some(r) = &a.value {
        return AlgebraicNumber::from_rational(num_traits::pow::Pow::pow(r, n as u32));
    }
    let c = power_poly(&a.minpoly, n as usize);
    let growth = (n as f64).log2().ceil() as i64 + n as i64 * (a.approx().norm().log2().max(0.0).ceil() as i64 + 1);
    select_root(&c, &|bits| Some(a.enclosure(bits + growth).powi(n))).expect("power of an algebraic number")
}

/// Exact equality.
pub fn alg_equals(a: &AlgebraicNumber, b: &AlgebraicNumber) -> bool {
    if a.minpoly != b.minpoly {
        return false;
    }
    if let (Some(x), Some(y)) = (&a.value, &b.value) {
        return x == y;
    }
    if a.is_real() != b.is_real() {
        return false;
    }
    if a.root == b.root {
        return true;
    }
    let mut bits = 8;
    loop {
        let ea = a.enclosure(bits);
        let eb = b.enclosure(bits);
        if !ea.intersects(&eb) {
            return false;
        }
        // each original box holds exactly one root
        if ea.subset_of(&b.root) || eb.subset_of(&a.root) {
            return true;
        }
        if unique_root_in(&a.minpoly, &ea.hull(&eb)) {
            return true;
        }
        bits *= 2;
    }
}

fn ordered_roots(p: &IntPolynomial) -> Result<Vec<AlgebraicNumber>> {
    if p.deg() == 1 {
        return Ok(vec![AlgebraicNumber::from_parts(p.clone(), CInterval::from_int(0, 64))]);
    }
    let boxes = isolate(p)?;
    let mut keyed: Vec<(CInterval, CInterval)> = Vec::with_capacity(boxes.len());
    for b in &boxes {
        if b.im.lo().signum() >= 0 {
            let r = refine(p, b, 64)?;
            if !is_real_box(b) {
                keyed.push((b.conj(), r.conj()));
            }
            keyed.push((b.clone(), r));
        }
    }
    keyed.sort_by(|x, y| {
        let (xr, xi) = x.1.mid();
        let (yr, yi) = y.1.mid();
        xr.cmp(&yr).then(xi.cmp(&yi))
    });
    Ok(keyed.into_iter().map(|(b, _)| AlgebraicNumber::from_parts(p.clone(), b)).collect())
}

/// All roots of the minimal polynomial of `a` (including `a`), ordered by
/// real part then imaginary part.
pub fn conjugates_of(a: &AlgebraicNumber) -> Vec<AlgebraicNumber> {
    if a.value.is_some() {
        return vec![a.clone()];
    }
    ordered_roots(&a.minpoly).expect("isolating roots of a minimal polynomial")
}

pub fn complex_conjugate_of(a: &AlgebraicNumber) -> AlgebraicNumber {
    if a.is_real() {
        return a.clone();
    }
    AlgebraicNumber { minpoly: a.minpoly.clone(), root: a.root.conj(), value: None }
}

pub fn is_algebraic_integer(a: &AlgebraicNumber) -> bool {
    a.minpoly.leading().is_some_and(|c| c.is_one())
}

/// Order of `a` as a root of unity, or `None` if it is not one.
pub fn root_of_unity_order(a: &AlgebraicNumber) -> Result<Option<u64>> {
    if a.is_zero() {
        return Err(Error::InvalidInput("zero is not a root of unity".into()));
    }
    if !is_algebraic_integer(a) {
        return Ok(None);
    }
    let d = a.degree() as u64;
    // phi(t) >= sqrt(t / 2), so phi(t) = d forces t <= 2 d^2
    for t in 1..=2 * d * d + 2 {
        if euler_phi(t) == d && cyclotomic(t) == a.minpoly {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Exact comparison of `|a|` with 1.
pub fn compare_modulus_to_one(a: &AlgebraicNumber) -> Result<Ordering> {
    if a.is_zero() {
        return Err(Error::InvalidInput("modulus of zero".into()));
    }
    if let Some(r) = &a.value {
        return Ok(r.abs().cmp(&Rational::one()));
    }
    // a real irrational number never has modulus one; a nonreal one does
    // exactly when its complex conjugate is its inverse
    if !a.is_real() && primitive_part(&a.minpoly.reverse()) == a.minpoly
        && alg_equals(&complex_conjugate_of(a), &alg_inv(a)?) {
            return Ok(Ordering::Equal);
        }
    let one = Dyadic::one();
    let mut bits = 8;
    loop {
        let m = a.abs_enclosure(bits);
        if m.hi() < &one {
            return Ok(Ordering::Less);
        }
        if m.lo() > &one {
            return Ok(Ordering::Greater);
        }
        bits *= 2;
    }
}

pub fn rational_value(a: &AlgebraicNumber) -> Option<Rational> {
    a.value.clone()
}

/// Positive square root of a positive real algebraic number.
pub fn alg_sqrt_positive(c: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if !c.is_real() || c.real_sign() <= 0 {
        return Err(Error::InvalidInput("square root of a non-positive number".into()));
    }
    let mut coeffs = Vec::with_capacity(2 * c.minpoly.coeffs().len());
    for (i, k) in c.minpoly.coeffs().iter().enumerate() {
        if i > 0 {
            coeffs.push(BigInt::zero());
        }
        coeffs.push(k.clone());
    }
    let q = Poly::new(coeffs);
    select_root(&q, &|bits| {
        let e = c.enclosure(bits + 4).re;
        e.is_positive().then(|| CInterval::real(e.with_prec((bits + 64) as u32).sqrt()))
    })
}

/// `|a|` as an exact algebraic number.
pub fn alg_abs(a: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if a.is_real() {
        return Ok(if a.real_sign() < 0 { alg_neg(a) } else { a.clone() });
    }
    let n = mul(a, &complex_conjugate_of(a))?;
    alg_sqrt_positive(&n)
}

/// Rigorous enclosure of `x` rounded outward to rationals.
pub fn interval_to_rationals(x: &Interval) -> (Rational, Rational) {
    (x.lo().to_rational(), x.hi().to_rational())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::int_poly;

    fn phi() -> AlgebraicNumber {
        AlgebraicNumber::root_near(&int_poly(&[-1, -1, 1]), 1.6, 0.0).unwrap()
    }

    fn psi() -> AlgebraicNumber {
        AlgebraicNumber::root_near(&int_poly(&[-1, -1, 1]), -0.6, 0.0).unwrap()
    }

    fn sqrt(n: i64) -> AlgebraicNumber {
        AlgebraicNumber::root_near(&int_poly(&[-n, 0, 1]), (n as f64).sqrt(), 0.0).unwrap()
    }

    fn q(n: i64, d: i64) -> AlgebraicNumber {
        AlgebraicNumber::from_rational(Rational::new(n.into(), d.into()))
    }

    #[test]
    fn sqrt2_squared_is_two() {
        let s = sqrt(2);
        let p = alg_arith(&s, &s, ArithOp::Mul).unwrap();
        assert_eq!(rational_value(&p), Some(Rational::from_integer(2.into())));
        assert!(alg_equals(&p, &AlgebraicNumber::from_int(2)));
    }

    #[test]
    fn sqrt2_plus_sqrt3() {
        let s = alg_arith(&sqrt(2), &sqrt(3), ArithOp::Add).unwrap();
        assert_eq!(s.minpoly(), &int_poly(&[1, 0, -10, 0, 1]));
        assert!((s.approx().re - 3.1462643699419726).abs() < 1e-12);
    }

    #[test]
    fn golden_conjugates_sum_to_one() {
        let s = alg_arith(&phi(), &psi(), ArithOp::Add).unwrap();
        assert_eq!(rational_value(&s), Some(Rational::one()));
        assert!(alg_equals(&phi(), &phi()));
        assert!(!alg_equals(&phi(), &psi()));
    }

    #[test]
    fn powers() {
        let p2 = alg_pow(&phi(), 2);
        assert_eq!(p2.minpoly(), &int_poly(&[1, -3, 1]));
        assert!((p2.approx().re - 2.618033988749895).abs() < 1e-12);
        assert_eq!(rational_value(&alg_pow(&q(3, 2), 4)), Some(Rational::new(81.into(), 16.into())));
        assert_eq!(rational_value(&alg_pow(&phi(), 0)), Some(Rational::one()));
    }

    #[test]
    fn conjugates_and_reflection() {
        let c = conjugates_of(&sqrt(2));
        assert_eq!(c.len(), 2);
        assert!(c[0].approx().re < 0.0 && c[1].approx().re > 0.0);
        let rho = int_poly(&[-1, -1, 0, 1]);
        let roots = AlgebraicNumber::roots_of(&rho).unwrap();
        let z = roots.iter().find(|r| r.approx().im > 0.0).unwrap();
        let zb = complex_conjugate_of(z);
        assert!(zb.approx().im < 0.0);
        assert!((z.approx().norm() - 0.868837).abs() < 1e-6);
        let i = AlgebraicNumber::root_near(&int_poly(&[1, 0, 1]), 0.0, 1.0).unwrap();
        assert!((complex_conjugate_of(&i).approx().im + 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrality_and_unity() {
        assert!(is_algebraic_integer(&phi()));
        assert!(!is_algebraic_integer(&q(3, 2)));
        let w = AlgebraicNumber::root_near(&int_poly(&[1, -1, 1]), 0.5, 0.8).unwrap();
        assert_eq!(root_of_unity_order(&w).unwrap(), Some(6));
        assert_eq!(root_of_unity_order(&AlgebraicNumber::one()).unwrap(), Some(1));
        assert_eq!(root_of_unity_order(&phi()).unwrap(), None);
        assert!(root_of_unity_order(&AlgebraicNumber::zero()).is_err());
    }

    #[test]
    fn modulus_trichotomy() {
        assert_eq!(compare_modulus_to_one(&psi()).unwrap(), Ordering::Less);
        assert_eq!(compare_modulus_to_one(&phi()).unwrap(), Ordering::Greater);
        let w = AlgebraicNumber::root_near(&int_poly(&[1, -1, 1]), 0.5, 0.8).unwrap();
        assert_eq!(compare_modulus_to_one(&w).unwrap(), Ordering::Equal);
    }

    #[test]
    fn division_and_inverse() {
        let a = phi();
        let inv = alg_inv(&a).unwrap();
        let one = alg_arith(&a, &inv, ArithOp::Mul).unwrap();
        assert_eq!(rational_value(&one), Some(Rational::one()));
        assert_eq!(alg_arith(&a, &AlgebraicNumber::zero(), ArithOp::Div).unwrap_err(), Error::DivisionByZero);
    }

    #[test]
    fn validated_construction() {
        let p = int_poly(&[-1, -1, 1]);
        let r = |n: i64, d: i64| Rational::new(n.into(), d.into());
        let bx = ComplexBox::new(r(3, 2), r(2, 1), r(0, 1), r(0, 1)).unwrap();
        let a = AlgebraicNumber::new(p.clone(), &bx).unwrap();
        assert!(alg_equals(&a, &phi()));
        let wide = ComplexBox::new(r(-2, 1), r(2, 1), r(0, 1), r(0, 1)).unwrap();
        assert!(AlgebraicNumber::new(p.clone(), &wide).is_err());
        assert!(AlgebraicNumber::new(int_poly(&[-1, 0, 1]), &wide).is_err());
    }

    #[test]
    fn absolute_values() {
        let rho = int_poly(&[-1, -1, 0, 1]);
        let z = AlgebraicNumber::root_near(&rho, -0.66, 0.56).unwrap();
        let m = alg_abs(&z).unwrap();
        assert!((m.approx().re - 0.868837).abs() < 1e-6);
        let psi_abs = alg_abs(&psi()).unwrap();
        assert_eq!(psi_abs.minpoly(), &int_poly(&[-1, 1, 1]));
    }
}
