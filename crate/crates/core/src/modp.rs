//! Polynomials over small prime fields, used to read off the degree
//! pattern of a factorization modulo `p`. Any factorization over the
//! rationals must be compatible with every such pattern, which prunes the
//! root-subset search in [`crate::factor`].

use crate::IntPolynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

type P = Vec<u64>;

fn trim(mut a: P) -> P {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, b, p);
        }
        b = mulm(b, b, p);
        e >>= 1;
    }
    acc
}

fn inv(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

fn reduce(f: &IntPolynomial, p: u64) -> P {
    let pb = BigInt::from(p);
    trim(f.coeffs().iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect())
}

fn rem(a: &P, b: &P, p: u64) -> P {
    let mut r = a.clone();
    let db = b.len() - 1;
    let li = inv(b[db], p);
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let q = mulm(r[k], li, p);
        if q != 0 {
            for i in 0..=db {
                let t = mulm(q, b[i], p);
                r[k - db + i] = (r[k - db + i] + p - t) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

fn div_exact(a: &P, b: &P, p: u64) -> P {
    let mut r = a.clone();
    let db = b.len() - 1;
    let li = inv(b[db], p);
    let mut q = vec![0; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = mulm(r[k], li, p);
        q[k - db] = c;
        for i in 0..=db {
            let t = mulm(c, b[i], p);
            r[k - db + i] = (r[k - db + i] + p - t) % p;
        }
    }
    trim(q)
}

fn mul(a: &P, b: &P, p: u64) -> P {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulm(x, y, p)) % p;
        }
    }
    trim(out)
}

fn gcd(a: &P, b: &P, p: u64) -> P {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&l) = a.last() {
        let li = inv(l, p);
        a.iter_mut().for_each(|c| *c = mulm(*c, li, p));
    }
    a
}

fn derivative(a: &P, p: u64) -> P {
    trim(a.iter().enumerate().skip(1).map(|(i, &c)| mulm(c, i as u64 % p, p)).collect())
}

fn pow_mod(base: &P, mut e: u64, f: &P, p: u64) -> P {
    let mut acc = vec![1u64];
    let mut b = rem(base, f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(&mul(&acc, &b, p), f, p);
        }
        b = rem(&mul(&b, &b, p), f, p);
        e >>= 1;
    }
    acc
}

/// Degrees of the irreducible factors of `f` modulo `p`, or `None` when
/// `p` divides the leading coefficient or `f` is not squarefree mod `p`.
pub fn factor_degrees_mod(f: &IntPolynomial, p: u64) -> Option<Vec<usize>> {
    let lc = f.leading()?;
    if (lc % BigInt::from(p)).is_zero() {
        return None;
    }
    let mut g = reduce(f, p);
    if gcd(&g, &derivative(&g, p), p).len() != 1 {
        return None;
    }
    let x: P = vec![0, 1];
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while g.len() > 1 {
        d += 1;
        if 2 * d > g.len() - 1 {
            out.push(g.len() - 1);
            break;
        }
        h = pow_mod(&h, p, &g, p);
        let mut hx = h.clone();
        hx.resize(hx.len().max(2), 0);
        hx[1] = (hx[1] + p - 1) % p;
        let c = gcd(&g, &trim(hx), p);
        let k = c.len() - 1;
        if k > 0 {
            for _ in 0..k / d {
                out.push(d);
            }
            g = div_exact(&g, &c, p);
            h = rem(&h, &g, p);
        }
    }
    out.sort_unstable();
    Some(out)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Degrees a rational factor of the squarefree polynomial `f` may have,
/// as a membership table indexed by degree.
pub fn admissible_degrees(f: &IntPolynomial) -> Vec<bool> {
    let n = f.deg();
    let mut allowed = vec![true; n + 1];
    let mut used = 0;
    let mut p = 1000u64;
    while used < 10 && p < 200_000 {
        p += 1;
        if !is_prime(p) {
            continue;
        }
        let Some(degs) = factor_degrees_mod(f, p) else { continue };
        used += 1;
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degs {
            for s in (d..=n).rev() {
                if sums[s - d] {
                    sums[s] = true;
                }
            }
        }
        for (a, s) in allowed.iter_mut().zip(sums) {
            *a &= s;
        }
        if allowed.iter().filter(|&&a| a).count() == 2 {
            break;
        }
    }
    allowed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intpoly::int_poly;

    #[test]
    fn degree_patterns() {
        // x^4 - 10x^2 + 1 splits into quadratics or linears everywhere
        let f = int_poly(&[1, 0, -10, 0, 1]);
        for p in [1009u64, 1013, 1019] {
            if let Some(d) = factor_degrees_mod(&f, p) {
                assert_eq!(d.iter().sum::<usize>(), 4);
                assert!(d.iter().all(|&k| k <= 2));
            }
        }
        // x^2 + 1 mod 1009 (1009 = 1 mod 4) splits
        assert_eq!(factor_degrees_mod(&int_poly(&[1, 0, 1]), 1009), Some(vec![1, 1]));
        assert_eq!(factor_degrees_mod(&int_poly(&[1, 0, 1]), 1019), Some(vec![2]));
    }

    #[test]
    fn irreducible_cubic_admits_only_trivial_degrees() {
        let a = admissible_degrees(&int_poly(&[-1, -1, 0, 1]));
        assert_eq!(a, vec![true, false, false, true]);
    }
}
