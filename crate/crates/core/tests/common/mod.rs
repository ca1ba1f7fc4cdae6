#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use power_sum_lab::algebraic::AlgebraicNumber;
use power_sum_lab::factor::factor_over_rationals;
use power_sum_lab::intpoly::{divisors, int_poly};
use power_sum_lab::{IntPolynomial, Poly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn phi() -> AlgebraicNumber {
    AlgebraicNumber::root_near(&int_poly(&[-1, -1, 1]), 1.6, 0.0).unwrap()
}

pub fn psi() -> AlgebraicNumber {
    AlgebraicNumber::root_near(&int_poly(&[-1, -1, 1]), -0.6, 0.0).unwrap()
}

pub fn sqrt2() -> AlgebraicNumber {
    AlgebraicNumber::root_near(&int_poly(&[-2, 0, 1]), 1.4, 0.0).unwrap()
}

/// Random integer polynomial of exact degree `d` with nonzero constant term.
pub fn random_poly<R: Rng>(r: &mut R, d: usize, height: i64) -> IntPolynomial {
    loop {
        let mut c: Vec<i64> = (0..=d).map(|_| r.gen_range(-height..=height)).collect();
        c[d] = r.gen_range(1..=height);
        if c[0] != 0 {
            return int_poly(&c);
        }
    }
}

/// A root of a random irreducible factor of a random polynomial of
/// degree at most `max_deg`.
pub fn random_algebraic<R: Rng>(r: &mut R, max_deg: usize, height: i64) -> AlgebraicNumber {
    let d = r.gen_range(1..=max_deg);
    let p = random_poly(r, d, height);
    let factors = factor_over_rationals(&p).unwrap();
    let (f, _) = &factors[r.gen_range(0..factors.len())];
    let roots = AlgebraicNumber::roots_of(f).unwrap();
    roots[r.gen_range(0..roots.len())].clone()
}

/// Smallest `t <= limit` with `x^t - 1` divisible by the minimal
/// polynomial, by plain long division over the integers.
pub fn brute_force_order(minpoly: &IntPolynomial, limit: u64) -> Option<u64> {
    (1..=limit).find(|&t| {
        let mut c = vec![BigInt::zero(); t as usize + 1];
        c[0] = -BigInt::one();
        c[t as usize] = BigInt::one();
        divides(minpoly, &Poly::new(c))
    })
}

/// Whether `d` divides `n` in `Q[x]`.
pub fn divides(d: &IntPolynomial, n: &IntPolynomial) -> bool {
    let dc: Vec<Rational> = d.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
    let mut r: Vec<Rational> = n.coeffs().iter().map(|c| Rational::from_integer(c.clone())).collect();
    let dd = dc.len() - 1;
    while r.len() > dd {
        let lead = r.last().unwrap().clone();
        if !lead.is_zero() {
            let f = lead / &dc[dd];
            let off = r.len() - 1 - dd;
            for (i, c) in dc.iter().enumerate() {
                r[off + i] -= &f * c;
            }
        }
        r.pop();
    }
    r.iter().all(|c| c.is_zero())
}

/// Lucas numbers by the integer recurrence.
pub fn lucas(n: usize) -> BigInt {
    let (mut a, mut b) = (BigInt::from(2), BigInt::one());
    for _ in 0..n {
        let c = &a + &b;
        a = b;
        b = c;
    }
    a
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

/// Degree at most 3 polynomials are reducible exactly when they have a
/// rational root; candidates come from the rational root theorem.
pub fn has_rational_root(p: &IntPolynomial) -> bool {
    let c = p.coeffs();
    let a0 = c[0].abs().to_u64().unwrap();
    let an = c[c.len() - 1].abs().to_u64().unwrap();
    if a0 == 0 {
        return true;
    }
    for u in divisors(a0) {
        for v in divisors(an) {
            for s in [1i64, -1] {
                let r = Rational::new(BigInt::from(s * u as i64), BigInt::from(v));
                let val = c.iter().rev().fold(Rational::zero(), |acc, k| acc * &r + Rational::from_integer(k.clone()));
                if val.is_zero() {
                    return true;
                }
            }
        }
    }
    false
}

/// Random monic integer polynomial of exact degree `d`, nonzero constant.
pub fn random_monic<R: Rng>(r: &mut R, d: usize, height: i64) -> IntPolynomial {
    loop {
        let mut c: Vec<i64> = (0..d).map(|_| r.gen_range(-height..=height)).collect();
        c.push(1);
        if c[0] != 0 {
            return int_poly(&c);
        }
    }
}

/// A random irreducible monic factor of a random monic polynomial.
pub fn random_monic_irreducible<R: Rng>(r: &mut R, max_deg: usize, height: i64) -> IntPolynomial {
    let d = r.gen_range(1..=max_deg);
    let p = random_monic(r, d, height);
    let factors = factor_over_rationals(&p).unwrap();
    let (f, _) = &factors[r.gen_range(0..factors.len())];
    if f.coeffs().last().unwrap() < &BigInt::zero() {
        f.scale(&-BigInt::one())
    } else {
        f.clone()
    }
}
