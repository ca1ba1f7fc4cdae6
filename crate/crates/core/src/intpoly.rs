//! Integer-polynomial algorithms: content, exact division, squarefree
//! decomposition, power sums and composed polynomials, cyclotomics.

use crate::poly::Poly;
use crate::{IntPolynomial, RatPolynomial, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn int_poly(coeffs: &[i64]) -> IntPolynomial {
    Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
}

pub fn to_rat(p: &IntPolynomial) -> RatPolynomial {
    p.map(|c| Rational::from_integer(c.clone()))
}

/// gcd of the coefficients (non-negative, zero for the zero polynomial).
pub fn content(p: &IntPolynomial) -> BigInt {
    p.coeffs()
        .iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Content-free multiple with positive leading coefficient.
pub fn primitive_part(p: &IntPolynomial) -> IntPolynomial {
    if p.is_zero() {
        return Poly::zero();
    }
    let mut g = content(p);
    if p.leading().unwrap().is_negative() {
        g = -g;
    }
    p.map(|c| c / &g)
}

pub fn is_primitive(p: &IntPolynomial) -> bool {
    !p.is_zero() && content(p).is_one() && p.leading().unwrap().is_positive()
}

/// Clear denominators of a rational polynomial and return the primitive
/// integer polynomial with the same roots.
pub fn from_rat_primitive(p: &RatPolynomial) -> IntPolynomial {
    if p.is_zero() {
        return Poly::zero();
    }
    let den = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints = p.map(|c| (c * Rational::from_integer(den.clone())).to_integer());
    primitive_part(&ints)
}

/// Exact quotient `a / b` over the integers, if `b` divides `a` in `Z[x]`.
pub fn exact_div(a: &IntPolynomial, b: &IntPolynomial) -> Option<IntPolynomial> {
    let db = b.degree()?;
    if a.is_zero() {
        return Some(Poly::zero());
    }
    let da = a.degree().unwrap();
    if da < db {
        return None;
    }
    let lc = &b.coeffs()[db];
    let mut rem: Vec<BigInt> = a.coeffs().to_vec();
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..quot.len()).rev() {
        let (c, r) = rem[k + db].div_rem(lc);
        if !r.is_zero() {
            return None;
        }
        if !c.is_zero() {
            for (j, bc) in b.coeffs().iter().enumerate() {
                rem[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    if rem[..db].iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(Poly::new(quot))
}

/// Primitive gcd of two integer polynomials.
pub fn gcd(a: &IntPolynomial, b: &IntPolynomial) -> IntPolynomial {
    from_rat_primitive(&to_rat(a).gcd(&to_rat(b)))
}

/// Yun's algorithm over Q; factors are primitive, multiplicities ascending.
pub fn squarefree_decomposition(p: &IntPolynomial) -> Vec<(IntPolynomial, u32)> {
    let mut out = Vec::new();
    if p.deg() == 0 {
        return out;
    }
    let f = to_rat(p).monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let c = df.div_rem(&a0).0;
    let mut d = &c - &b.derivative();
    let mut i = 1u32;
    while b.deg() > 0 {
        let a = b.gcd(&d);
        let nb = b.div_rem(&a).0;
        let nc = d.div_rem(&a).0;
        d = &nc - &nb.derivative();
        b = nb;
        if a.deg() > 0 {
            out.push((from_rat_primitive(&a), i));
        }
        i += 1;
    }
    out
}

/// Primitive squarefree part (product of the distinct irreducible factors).
pub fn squarefree_part(p: &IntPolynomial) -> IntPolynomial {
    let f = to_rat(p);
    let g = f.gcd(&f.derivative());
    from_rat_primitive(&f.div_rem(&g).0)
}

pub fn is_squarefree(p: &IntPolynomial) -> bool {
    let f = to_rat(p);
    f.gcd(&f.derivative()).deg() == 0
}

/// Exact sign of `p(r)`.
pub fn sign_at(p: &IntPolynomial, r: &Rational) -> i32 {
    let (num, den) = (r.numer(), r.denom());
    let mut acc = BigInt::zero();
    let mut den_pow = BigInt::one();
    // Horner on the homogenised form sum c_i num^i den^(d-i)
    for c in p.coeffs().iter().rev() {
        acc = acc * num + c * &den_pow;
        den_pow *= den;
    }
    if acc.is_zero() {
        0
    } else if acc.is_positive() {
        1
    } else {
        -1
    }
}

pub fn eval_rational(p: &IntPolynomial, r: &Rational) -> Rational {
    p.eval_with(r, |c| Rational::from_integer(c.clone()))
}

/// Power sums `P_0, ..., P_count` of the roots of `p` (with multiplicity).
pub fn power_sums(p: &IntPolynomial, count: usize) -> Vec<Rational> {
    let d = p.deg();
    let lc = Rational::from_integer(p.leading().cloned().unwrap_or_else(BigInt::one));
    let c: Vec<Rational> = p
        .coeffs()
        .iter()
        .map(|a| Rational::from_integer(a.clone()) / &lc)
        .collect();
    let mut s = Vec::with_capacity(count + 1);
    s.push(Rational::from_integer(BigInt::from(d)));
    for k in 1..=count {
        let mut acc = Rational::zero();
        if k <= d {
            acc -= &c[d - k] * Rational::from_integer(BigInt::from(k));
        }
        for i in 1..=k.saturating_sub(1).min(d) {
            acc -= &c[d - i] * &s[k - i];
        }
        s.push(acc);
    }
    s
}

/// Monic polynomial of degree `deg` whose roots have power sums
/// `sums[1..=deg]` (Newton's identities).
pub fn from_power_sums(sums: &[Rational], deg: usize) -> RatPolynomial {
    let mut e = vec![Rational::one()];
    for k in 1..=deg {
        let mut acc = Rational::zero();
        for i in 1..=k {
            let term = &e[k - i] * &sums[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        e.push(acc / Rational::from_integer(BigInt::from(k)));
    }
    let mut coeffs = vec![Rational::zero(); deg + 1];
    for (k, ek) in e.into_iter().enumerate() {
        coeffs[deg - k] = if k % 2 == 0 { ek } else { -ek };
    }
    Poly::new(coeffs)
}

fn binomial_row(k: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..k {
        let next = &row[i] * BigInt::from(k - i) / BigInt::from(i + 1);
        row.push(next);
    }
    row
}

/// Primitive polynomial whose roots are all sums `a_i + b_j`.
pub fn composed_sum(pa: &IntPolynomial, pb: &IntPolynomial) -> IntPolynomial {
    let deg = pa.deg() * pb.deg();
    let sa = power_sums(pa, deg);
    let sb = power_sums(pb, deg);
    let mut s = vec![Rational::from_integer(BigInt::from(deg))];
    for k in 1..=deg {
        let row = binomial_row(k);
        let mut acc = Rational::zero();
        for l in 0..=k {
            acc += Rational::from_integer(row[l].clone()) * &sa[l] * &sb[k - l];
        }
        s.push(acc);
    }
    from_rat_primitive(&from_power_sums(&s, deg))
}

/// Primitive polynomial whose roots are all products `a_i * b_j`.
pub fn composed_product(pa: &IntPolynomial, pb: &IntPolynomial) -> IntPolynomial {
    let deg = pa.deg() * pb.deg();
    let sa = power_sums(pa, deg);
    let sb = power_sums(pb, deg);
    let s: Vec<Rational> = (0..=deg).map(|k| &sa[k] * &sb[k]).collect();
    from_rat_primitive(&from_power_sums(&s, deg))
}

/// Primitive polynomial whose roots are the `n`-th powers of the roots of `p`.
pub fn power_poly(p: &IntPolynomial, n: usize) -> IntPolynomial {
    let d = p.deg();
    if n == 0 {
        return int_poly(&[-1, 1]);
    }
    let sums = power_sums(p, d * n);
    let s: Vec<Rational> = (0..=d).map(|k| sums[k * n].clone()).collect();
    from_rat_primitive(&from_power_sums(&s, d))
}

/// `p(x - r)`, made primitive: roots shifted by `+r`.
pub fn shift_roots(p: &IntPolynomial, r: &Rational) -> IntPolynomial {
    let lin: RatPolynomial = Poly::new(vec![-r.clone(), Rational::one()]);
    from_rat_primitive(&to_rat(p).compose(&lin))
}

/// `p(x / r)`, made primitive: roots scaled by `r` (nonzero).
pub fn scale_roots(p: &IntPolynomial, r: &Rational) -> IntPolynomial {
    let inv = Rational::one() / r;
    let mut pow = Rational::one();
    let mut coeffs = Vec::with_capacity(p.coeffs().len());
    for c in p.coeffs() {
        coeffs.push(Rational::from_integer(c.clone()) * &pow);
        pow *= &inv;
    }
    from_rat_primitive(&Poly::new(coeffs))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Prime factorisation by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factor_u64(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

fn mobius(n: u64) -> i32 {
    let f = factor_u64(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// The `t`-th cyclotomic polynomial.
pub fn cyclotomic(t: u64) -> IntPolynomial {
    let mut num = IntPolynomial::one();
    let mut den = IntPolynomial::one();
    for d in divisors(t) {
        let xd = &Poly::monomial(BigInt::one(), d as usize) - &IntPolynomial::one();
        match mobius(t / d) {
            1 => num = &num * &xd,
            -1 => den = &den * &xd,
            _ => {}
        }
    }
    exact_div(&num, &den).expect("cyclotomic quotient is exact")
}

/// Human-readable form such as `x^2 - x - 1`.
pub fn format_poly(p: &IntPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        if a.is_one() && i > 0 {
            out.push_str(&mono);
        } else {
            out.push_str(&a.to_string());
            out.push_str(&mono);
        }
    }
    out
}
