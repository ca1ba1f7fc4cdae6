//! Decimal rendering of exact rationals.

use crate::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Round to the nearest integer, ties to even.
pub fn round_half_even(r: &Rational) -> BigInt {
    let fl = r.floor().to_integer();
    let frac = r - Rational::from_integer(fl.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    match frac.cmp(&half) {
        std::cmp::Ordering::Less => fl,
        std::cmp::Ordering::Greater => fl + 1,
        std::cmp::Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1
            }
        }
    }
}

/// `floor(log10 |r|)` for nonzero `r`.
fn decimal_exponent(r: &Rational) -> i64 {
    let a = r.abs();
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    loop {
        let p = if e >= 0 {
            Rational::from_integer(pow10(e as u32))
        } else {
            Rational::new(BigInt::one(), pow10((-e) as u32))
        };
        if a < p {
            e -= 1;
        } else if a >= &p * Rational::from_integer(BigInt::from(10)) {
            e += 1;
        } else {
            return e;
        }
    }
}

/// `digits` significant digits, ties to even. Positional notation for
/// decimal exponents in `[-30, 30]`, scientific otherwise.
pub fn format_sig(r: &Rational, digits: u32) -> String {
    format_with(r, digits, round_half_even)
}

/// Like [`format_sig`] but rounded away from zero, for error bounds.
pub fn format_sig_up(r: &Rational, digits: u32) -> String {
    format_with(r, digits, |x| x.ceil().to_integer())
}

fn format_with(r: &Rational, digits: u32, round: impl Fn(&Rational) -> BigInt) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let neg = r.is_negative();
    let a = r.abs();
    let mut e = decimal_exponent(&a);
    let mut n;
    loop {
        let shift = digits as i64 - 1 - e;
        let scaled = if shift >= 0 {
            &a * Rational::from_integer(pow10(shift as u32))
        } else {
            &a / Rational::from_integer(pow10((-shift) as u32))
        };
        n = round(&scaled);
        if n >= pow10(digits) {
            e += 1;
            continue;
        }
        break;
    }
    let ds = n.to_string();
    let body = if (-30..=30).contains(&e) {
        if e >= digits as i64 - 1 {
            format!("{}{}", ds, "0".repeat((e - digits as i64 + 1) as usize))
        } else if e >= 0 {
            let (i, f) = ds.split_at(e as usize + 1);
            format!("{i}.{f}")
        } else {
            format!("0.{}{}", "0".repeat((-e - 1) as usize), ds)
        }
    } else {
        let (i, f) = ds.split_at(1);
        format!("{i}.{f}e{e}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// `p/q` or `p` for integers.
pub fn rational_string(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p/q`, an integer, or a decimal such as `0.7` or `1.5e-3`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((m, e)) = s.split_once(['e', 'E']) {
        let m = parse_rational(m)?;
        let e: i32 = e.parse().ok()?;
        let p = Rational::from_integer(pow10(e.unsigned_abs()));
        return Some(if e >= 0 { m * p } else { m / p });
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    if let Some((i, f)) = s.split_once('.') {
        if f.is_empty() || !f.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = i.starts_with('-');
        let i = i.trim_start_matches(['-', '+']);
        let whole: BigInt = if i.is_empty() { BigInt::zero() } else { i.parse().ok()? };
        let frac: BigInt = f.parse().ok()?;
        let r = Rational::from_integer(whole) + Rational::new(frac, pow10(f.len() as u32));
        return Some(if neg { -r } else { r });
    }
    s.parse::<BigInt>().ok().map(Rational::from_integer)
}
