//! Simple number fields `Q(alpha)`: elements are rational polynomials in
//! the generator reduced modulo its minimal polynomial. Embeddings are
//! named by the conjugate the generator is sent to.

use crate::algebraic::{alg_arith, alg_equals, conjugates_of, select_root, AlgebraicNumber, ArithOp};
use crate::error::{Error, Result};
use crate::interval::{CInterval, Interval};
use crate::intpoly::{from_rat_primitive, from_power_sums, power_sums, to_rat};
use crate::{IntPolynomial, Poly, RatPolynomial, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `Q(gen)`.
#[derive(Clone, Debug)]
pub struct NumberField {
    gen: AlgebraicNumber,
    modulus: RatPolynomial,
    traces: Vec<Rational>,
}

/// An element of a [`NumberField`], as a polynomial of degree below the
/// field degree.
pub type FieldElem = RatPolynomial;

impl NumberField {
    pub fn new(gen: AlgebraicNumber) -> Self {
        let modulus = to_rat(gen.minpoly()).monic();
        let d = gen.degree();
        let traces = power_sums(gen.minpoly(), d.saturating_sub(1));
        NumberField { gen, modulus, traces }
    }

    pub fn generator(&self) -> &AlgebraicNumber {
        &self.gen
    }

    pub fn degree(&self) -> usize {
        self.gen.degree()
    }

    pub fn reduce(&self, e: &RatPolynomial) -> FieldElem {
        e.rem(&self.modulus)
    }

    pub fn from_coeffs(&self, c: &[Rational]) -> FieldElem {
        self.reduce(&Poly::new(c.to_vec()))
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.mul_mod(b, &self.modulus)
    }

    pub fn pow(&self, a: &FieldElem, e: u64) -> FieldElem {
        a.pow_mod(e, &self.modulus)
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        a.inv_mod(&self.modulus).ok_or(Error::DivisionByZero)
    }

    /// The generator itself.
    pub fn x(&self) -> FieldElem {
        self.reduce(&Poly::monomial(Rational::one(), 1))
    }

    /// Trace down to the rationals.
    pub fn trace(&self, e: &FieldElem) -> Rational {
        e.coeffs().iter().zip(&self.traces).fold(Rational::zero(), |acc, (c, t)| acc + c * t)
    }

    /// Characteristic polynomial of multiplication by `e`, monic.
    pub fn charpoly(&self, e: &FieldElem) -> RatPolynomial {
        let d = self.degree();
        let mut sums = vec![Rational::from_integer(BigInt::from(d))];
        let mut p = Poly::one();
        for _ in 0..d {
            p = self.mul(&p, e);
            sums.push(self.trace(&p));
        }
        from_power_sums(&sums, d)
    }

    /// Enclosure of `sigma(e)` where `sigma(gen) = conj`.
    pub fn enclose(&self, e: &FieldElem, conj: &AlgebraicNumber, bits: i64) -> CInterval {
        let slack = growth(e, conj);
        let prec = (bits + slack + 64) as u32;
        let x = conj.enclosure(bits + slack);
        eval_interval(e, &x, prec)
    }

    /// `sigma(e)` as an exact algebraic number, `sigma(gen) = conj`.
    pub fn embed(&self, e: &FieldElem, conj: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        if conj.minpoly() != self.gen.minpoly() {
            return Err(Error::invalid("not a conjugate of the field generator"));
        }
        if e.deg() == 0 {
            return Ok(AlgebraicNumber::from_rational(e.coeff(0)));
        }
        let cp = from_rat_primitive(&self.charpoly(e));
        select_root(&cp, &|bits| Some(self.enclose(e, conj, bits)))
    }

    pub fn to_algebraic(&self, e: &FieldElem) -> Result<AlgebraicNumber> {
        self.embed(e, &self.gen.clone())
    }
}

/// Bits lost when evaluating `e` at `x`.
fn growth(e: &FieldElem, x: &AlgebraicNumber) -> i64 {
    let r = x.approx().norm().max(1.0);
    let s: f64 = e
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.to_f64().unwrap_or(f64::MAX).abs() * r.powi(i as i32))
        .sum();
    s.max(1.0).log2().ceil() as i64 + e.coeffs().len() as i64 + 8
}

fn rational_ci(r: &Rational, prec: u32) -> CInterval {
    CInterval::real(Interval::from_rational(r, prec))
}

/// Horner evaluation of a rational polynomial on a complex interval.
pub fn eval_interval(p: &RatPolynomial, x: &CInterval, prec: u32) -> CInterval {
    let mut acc = CInterval::from_int(0, prec);
    for c in p.coeffs().iter().rev() {
        acc = &(&acc * x) + &rational_ci(c, prec);
    }
    acc
}

/// Smallest positive integer `D` with `D * x` an algebraic integer.
pub fn integrality_denominator(x: &AlgebraicNumber) -> BigInt {
    let c = x.minpoly().coeffs();
    let e = c.len() - 1;
    let lc = &c[e];
    let ok = |d: &BigInt| (1..=e).all(|i| (&c[e - i] * num_traits::pow(d.clone(), i)).is_multiple_of(lc));
    let lc_abs = lc.abs();
    let mut divs: Vec<BigInt> = Vec::new();
    let mut k = BigInt::one();
    while &k * &k <= lc_abs {
        if lc_abs.is_multiple_of(&k) {
            divs.push(k.clone());
            divs.push(&lc_abs / &k);
        }
        k += 1;
    }
    divs.sort();
    divs.into_iter().find(|d| ok(d)).unwrap_or(lc_abs)
}

/// Simultaneous embeddings of a list of algebraic numbers.
#[derive(Clone, Debug)]
pub struct JointConjugates {
    /// A primitive element of the compositum.
    pub primitive: AlgebraicNumber,
    /// `images[k][r]` is the image of input `r` under embedding `k`;
    /// embedding 0 is the identity.
    pub images: Vec<Vec<AlgebraicNumber>>,
}

fn certify_distinct(vals: &[Vec<AlgebraicNumber>], t: &Rational, ys: &[AlgebraicNumber], bits: i64) -> bool {
    let prec = (bits + 64) as u32;
    let tc = rational_ci(t, prec);
    let boxes: Vec<CInterval> = vals
        .iter()
        .flat_map(|g| ys.iter().map(move |y| (g, y)))
        .map(|(g, y)| &g[0].enclosure(bits) + &(&tc * &y.enclosure(bits)))
        .collect();
    (0..boxes.len()).all(|i| (i + 1..boxes.len()).all(|j| !boxes[i].intersects(&boxes[j])))
}

/// Each embedding of `Q(xs)` with the images of every entry.
pub fn joint_conjugates(xs: &[AlgebraicNumber]) -> Result<JointConjugates> {
    if xs.is_empty() {
        return Err(Error::invalid("no numbers given"));
    }
    let mut prim = xs[0].clone();
    // rows: [primitive image, image of xs[0], ..., image of xs[r-1]]
    let mut rows: Vec<Vec<AlgebraicNumber>> = order_identity_first(&prim)
        .into_iter()
        .map(|c| vec![c.clone(), c])
        .collect();
    for y in &xs[1..] {
        if y.rational_value().is_some() {
            rows.iter_mut().for_each(|r| r.push(y.clone()));
            continue;
        }
        let ys = order_identity_first(y);
        let mut chosen = None;
        'search: for step in 1..40i64 {
            let t = Rational::from_integer(BigInt::from(if step % 2 == 1 { (step + 1) / 2 } else { -step / 2 }));
            let mut bits = 16;
            while bits <= 256 {
                if certify_distinct(&rows, &t, &ys, bits) {
                    chosen = Some(t);
                    break 'search;
                }
                bits *= 2;
            }
        }
        let t = chosen.ok_or_else(|| Error::Internal("no separating primitive element found".into()))?;
        let ty = alg_arith(&AlgebraicNumber::from_rational(t.clone()), y, ArithOp::Mul)?;
        let next = alg_arith(&prim, &ty, ArithOp::Add)?;
        let mut new_rows = Vec::new();
        for conj in order_identity_first(&next) {
            let mut bits = 16;
            let (k, l) = loop {
                let prec = (bits + 64) as u32;
                let e = conj.enclosure(bits);
                let tc = rational_ci(&t, prec);
                let hits: Vec<(usize, usize)> = (0..rows.len())
                    .flat_map(|k| (0..ys.len()).map(move |l| (k, l)))
                    .filter(|&(k, l)| (&rows[k][0].enclosure(bits) + &(&tc * &ys[l].enclosure(bits))).intersects(&e))
                    .collect();
                if hits.len() == 1 {
                    break hits[0];
                }
                if bits > 1 << 12 {
                    return Err(Error::Internal("could not match conjugates of the primitive element".into()));
                }
                bits *= 2;
            };
            let mut row = rows[k].clone();
            row[0] = conj;
            row.push(ys[l].clone());
            new_rows.push(row);
        }
        rows = new_rows;
        prim = next;
    }
    Ok(JointConjugates {
        primitive: prim,
        images: rows.into_iter().map(|mut r| r.split_off(1)).collect(),
    })
}

/// Conjugates with `a` itself first.
fn order_identity_first(a: &AlgebraicNumber) -> Vec<AlgebraicNumber> {
    let mut c = conjugates_of(a);
    if let Some(i) = c.iter().position(|x| alg_equals(x, a)) {
        let me = c.remove(i);
        c.insert(0, me);
    }
    c
}

/// `lc(minpoly) * x` is an algebraic integer.
fn integral_scale(x: &AlgebraicNumber) -> Rational {
    Rational::from_integer(x.minpoly().leading().cloned().unwrap_or_else(BigInt::one))
}

fn integer_in(x: &Interval) -> Option<BigInt> {
    let lo = x.lo().ceil_int();
    let hi = x.hi().floor_int();
    (lo == hi).then_some(lo)
}

/// Representation of `beta` as a polynomial in the generator, or `None`
/// when `beta` does not lie in the field.
pub fn express_in(beta: &AlgebraicNumber, field: &NumberField) -> Result<Option<FieldElem>> {
    if let Some(r) = beta.rational_value() {
        return Ok(Some(Poly::constant(r.clone())));
    }
    let d = field.degree();
    if !d.is_multiple_of(beta.degree()) {
        return Ok(None);
    }
    let joint = joint_conjugates(&[field.gen.clone(), beta.clone()])?;
    if joint.images.len() != d {
        return Ok(None);
    }
    let a = integral_scale(&field.gen);
    let b = integral_scale(beta);
    let mut bits = 64i64;
    loop {
        let prec = (bits + 64) as u32;
        let ac = rational_ci(&a, prec);
        let bc = rational_ci(&b, prec);
        let xs: Vec<CInterval> = joint.images.iter().map(|r| &ac * &r[0].enclosure(bits)).collect();
        let ys: Vec<CInterval> = joint.images.iter().map(|r| &bc * &r[1].enclosure(bits)).collect();
        if let Some(c) = interpolate(&xs, &ys, prec) {
            // c'(y) = c(y) / disc, then beta = c'(a x) / b
            let (num, disc) = c;
            let mut coeffs = Vec::with_capacity(num.len());
            let mut apow = Rational::one();
            for n in &num {
                coeffs.push(Rational::from_integer(n.clone()) * &apow / (&disc * &b));
                apow *= &a;
            }
            let cand = field.reduce(&Poly::new(coeffs));
            if alg_equals(&field.to_algebraic(&cand)?, beta) {
                return Ok(Some(cand));
            }
        }
        if bits > 1 << 13 {
            return Err(Error::Internal("interpolation did not converge".into()));
        }
        bits *= 2;
    }
}

/// Lagrange interpolation through `(xs[k], ys[k])`, returned as integer
/// coefficients of `disc * c` together with the integer `disc`, when every
/// enclosure pins a unique integer.
fn interpolate(xs: &[CInterval], ys: &[CInterval], prec: u32) -> Option<(Vec<BigInt>, Rational)> {
    let d = xs.len();
    let mut disc = CInterval::from_int(1, prec);
    for k in 0..d {
        for l in k + 1..d {
            let t = &xs[k] - &xs[l];
            disc = &disc * &(&t * &t);
        }
    }
    let disc_int = integer_in(&disc.re)?;
    if disc_int.is_zero() {
        return None;
    }
    let dc = CInterval::from_int(disc_int.clone(), prec);
    let mut acc: Vec<CInterval> = vec![CInterval::from_int(0, prec); d];
    for k in 0..d {
        let mut basis = vec![CInterval::from_int(1, prec)];
        let mut denom = CInterval::from_int(1, prec);
        for l in 0..d {
            if l == k {
                continue;
            }
            let mut next = vec![CInterval::from_int(0, prec); basis.len() + 1];
            for (i, c) in basis.iter().enumerate() {
                next[i + 1] = &next[i + 1] + c;
                next[i] = &next[i] - &(c * &xs[l]);
            }
            basis = next;
            denom = &denom * &(&xs[k] - &xs[l]);
        }
        let scale = (&ys[k] * &dc).div(&denom)?;
        for (i, c) in basis.iter().enumerate() {
            acc[i] = &acc[i] + &(c * &scale);
        }
    }
    let coeffs = acc.iter().map(|c| integer_in(&c.re)).collect::<Option<Vec<_>>>()?;
    Some((coeffs, Rational::from_integer(disc_int)))
}

/// Rational polynomial as an exact integer polynomial with its denominator.
pub fn clear_denominators(p: &RatPolynomial) -> (IntPolynomial, BigInt) {
    let l = p.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = p.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    (Poly::new(ints), l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::alg_pow;
    use crate::intpoly::int_poly;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn phi() -> AlgebraicNumber {
        AlgebraicNumber::root_near(&int_poly(&[-1, -1, 1]), 1.6, 0.0).unwrap()
    }

    #[test]
    fn traces_and_embeddings() {
        let k = NumberField::new(phi());
        assert_eq!(k.trace(&k.x()), rat(1, 1));
        // phi^10 = 55 phi + 34, trace = L_10 = 123
        let p10 = k.pow(&k.x(), 10);
        assert_eq!(p10, Poly::new(vec![rat(34, 1), rat(55, 1)]));
        assert_eq!(k.trace(&p10), rat(123, 1));
        let psi = AlgebraicNumber::root_near(&int_poly(&[-1, -1, 1]), -0.6, 0.0).unwrap();
        let e = k.embed(&p10, &psi).unwrap();
        assert!(alg_equals(&e, &alg_pow(&psi, 10)));
        let half = k.from_coeffs(&[rat(1, 2)]);
        assert_eq!(k.to_algebraic(&half).unwrap().rational_value(), Some(&rat(1, 2)));
    }

    #[test]
    fn membership() {
        let k = NumberField::new(phi());
        let s5 = AlgebraicNumber::root_near(&int_poly(&[-5, 0, 1]), 2.2, 0.0).unwrap();
        // sqrt 5 = 2 phi - 1
        assert_eq!(express_in(&s5, &k).unwrap(), Some(Poly::new(vec![rat(-1, 1), rat(2, 1)])));
        let s2 = AlgebraicNumber::root_near(&int_poly(&[-2, 0, 1]), 1.4, 0.0).unwrap();
        assert_eq!(express_in(&s2, &k).unwrap(), None);
        let cube = AlgebraicNumber::root_near(&int_poly(&[-2, 0, 0, 1]), 1.26, 0.0).unwrap();
        assert_eq!(express_in(&cube, &k).unwrap(), None);
        // a nonmonic generator
        let h = AlgebraicNumber::root_near(&int_poly(&[-5, 0, 4]), 1.1, 0.0).unwrap();
        let kh = NumberField::new(h.clone());
        let r = express_in(&s5, &kh).unwrap().unwrap();
        assert!(alg_equals(&kh.to_algebraic(&r).unwrap(), &s5));
    }

    #[test]
    fn joint_embeddings() {
        let s2 = AlgebraicNumber::root_near(&int_poly(&[-2, 0, 1]), 1.4, 0.0).unwrap();
        let s3 = AlgebraicNumber::root_near(&int_poly(&[-3, 0, 1]), 1.7, 0.0).unwrap();
        let j = joint_conjugates(&[s2.clone(), s3.clone()]).unwrap();
        assert_eq!(j.images.len(), 4);
        assert!(alg_equals(&j.images[0][0], &s2) && alg_equals(&j.images[0][1], &s3));
        let j2 = joint_conjugates(&[phi(), alg_pow(&phi(), 3)]).unwrap();
        assert_eq!(j2.images.len(), 2);
    }

    #[test]
    fn denominators() {
        assert_eq!(integrality_denominator(&AlgebraicNumber::from_rational(rat(3, 4))), BigInt::from(4));
        // (1 + sqrt 5) / 2 is integral; sqrt 5 / 2 needs 2
        assert_eq!(integrality_denominator(&phi()), BigInt::one());
        let h = AlgebraicNumber::root_near(&int_poly(&[-5, 0, 4]), 1.1, 0.0).unwrap();
        assert_eq!(integrality_denominator(&h), BigInt::from(2));
    }
}
