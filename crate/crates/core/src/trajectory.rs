//! Rigorous nearest-integer distances of `sum q_i alpha_i^n`.
//!
//! The closest integer `p` minimizes `|x - p|` in the plane, which is the
//! integer nearest to the real part; on an exact half-integer tie the
//! smaller integer is taken.

use crate::algebraic::{alg_arith, alg_pow, complex_conjugate_of, interval_to_rationals, AlgebraicNumber, ArithOp};
use crate::decimal::format_sig;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::interval::{CInterval, Interval};
use crate::scalar::cmp_rational;
use crate::structure::PowerSumSpec;
use crate::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Mutex;

/// Precision schedule: start at 64 bits and double at most
/// `max_escalations` times.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    pub target_bits: u32,
    pub max_escalations: u32,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { target_bits: 128, max_escalations: 8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistanceSample {
    pub n: u64,
    pub p: BigInt,
    pub dist_lo: Rational,
    pub dist_hi: Rational,
    /// The closest integer is certain and the enclosure meets the target.
    pub decided: bool,
}

impl DistanceSample {
    /// Sample of an exactly known rational value.
    pub fn exact(n: u64, x: &Rational) -> Self {
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let p = (x - half).ceil().to_integer();
        let d = (x - Rational::from_integer(p.clone())).abs();
        DistanceSample { n, p, dist_lo: d.clone(), dist_hi: d, decided: true }
    }

    pub fn midpoint(&self) -> Rational {
        (&self.dist_lo + &self.dist_hi) / Rational::from_integer(BigInt::from(2))
    }
}

/// Evaluator for one spec with a cache of base enclosures.
pub struct Evaluator {
    spec: PowerSumSpec,
    rational: Option<Vec<(Rational, Rational)>>,
    config: EvalConfig,
    cache: Mutex<HashMap<(usize, bool, i64), CInterval>>,
}

impl Evaluator {
    pub fn new(spec: &PowerSumSpec, config: EvalConfig) -> Self {
        let rational = spec
            .terms
            .iter()
            .map(|t| Some((t.q.rational_value()?.clone(), t.alpha.rational_value()?.clone())))
            .collect();
        Evaluator { spec: spec.clone(), rational, config, cache: Mutex::new(HashMap::new()) }
    }

    fn enclosure(&self, i: usize, alpha: bool, bits: i64) -> CInterval {
        let key = (i, alpha, bits);
        if let Some(c) = self.cache.lock().unwrap().get(&key) {
            return c.clone();
        }
        let t = &self.spec.terms[i];
        let c = if alpha { t.alpha.enclosure(bits) } else { t.q.enclosure(bits) };
        self.cache.lock().unwrap().insert(key, c.clone());
        c
    }

    /// Enclosure of the sum with absolute width about `2^-acc`.
    fn sum_enclosure(&self, n: u64, acc: i64) -> CInterval {
        let mut total: Option<CInterval> = None;
        for (i, t) in self.spec.terms.iter().enumerate() {
            let a = t.alpha.approx().norm().max(1.0);
            let q = t.q.approx().norm().max(1.0);
            let growth = (n as f64 * a.log2() + q.log2()).ceil() as i64 + (64 - n.leading_zeros() as i64) + 8;
            let bits = round_up_pow2(acc + growth);
            let prec = (bits + growth + 64) as u32;
            let x = self.enclosure(i, true, bits);
            let x = CInterval::new(x.re.with_prec(prec), x.im.with_prec(prec));
            let qe = self.enclosure(i, false, bits);
            let qe = CInterval::new(qe.re.with_prec(prec), qe.im.with_prec(prec));
            let term = &qe * &x.powi(n);
            total = Some(match total {
                None => term,
                Some(s) => &s + &term,
            });
        }
        total.expect("nonempty spec")
    }

    fn exact_sum(&self, n: u64) -> Result<AlgebraicNumber> {
        let mut s = AlgebraicNumber::zero();
        for t in &self.spec.terms {
            let v = alg_arith(&t.q, &alg_pow(&t.alpha, n), ArithOp::Mul)?;
            s = alg_arith(&s, &v, ArithOp::Add)?;
        }
        Ok(s)
    }

    pub fn eval(&self, n: u64) -> Result<DistanceSample> {
        self.eval_with_target(n, self.config.target_bits)
    }

    pub fn eval_with_target(&self, n: u64, target_bits: u32) -> Result<DistanceSample> {
        if n == 0 {
            return Err(Error::invalid("n must be positive"));
        }
        if let Some(terms) = &self.rational {
            let x = terms.iter().fold(Rational::zero(), |acc, (q, a)| acc + q * num_traits::pow(a.clone(), n as usize));
            return Ok(DistanceSample::exact(n, &x));
        }
        let target = Dyadic::pow2(-(target_bits as i64));
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let mut tried_exact = false;
        // nearest integer fixed by the tie rule once Re(a_n) is known exactly
        let mut forced: Option<BigInt> = None;
        let mut best = None;
        for k in 0..=self.config.max_escalations {
            let acc = (64i64 << k) + 16;
            let s = self.sum_enclosure(n, acc);
            let (lo, hi) = interval_to_rationals(&s.re);
            let (p_lo, p_hi) = match &forced {
                Some(p) => (p.clone(), p.clone()),
                None => ((&lo - &half).ceil().to_integer(), (&hi - &half).ceil().to_integer()),
            };
            let p = p_lo.clone();
            let shifted = CInterval::new(&s.re - &Interval::from_int(p.clone(), s.re.prec()), s.im.clone());
            let d = shifted.abs();
            let (dlo, dhi) = interval_to_rationals(&d);
            let sample = DistanceSample { n, p: p.clone(), dist_lo: dlo, dist_hi: dhi, decided: false };
            if p_lo == p_hi {
                if d.width() < target {
                    return Ok(DistanceSample { decided: true, ..sample });
                }
            } else if !tried_exact && s.width() < Dyadic::pow2(-EXACT_TIE_BITS) {
                // a half-integer sits inside the enclosure; it may be exact
                tried_exact = true;
                let x = self.exact_sum(n)?;
                if let Some(x) = x.rational_value() {
                    return Ok(DistanceSample::exact(n, x));
                }
                // nonreal sum: Re(a_n) = (x + conj x) / 2 may still be a half-integer
                let re = if x.is_real() { None } else { Some(alg_arith(&x, &complex_conjugate_of(&x), ArithOp::Add)?) };
                if let Some(re) = re.as_ref().and_then(|r| r.rational_value()) {
                    let t = re / Rational::from_integer(BigInt::from(2)) - &half;
                    if t.is_integer() {
                        forced = Some(t.to_integer());
                    }
                }
            }
            best = Some(sample);
        }
        Ok(best.expect("at least one evaluation"))
    }
}

/// Enclosure width below which a straddled half-integer is checked
/// exactly. Genuine near-ties from decaying terms usually separate long
/// before this, and the exact sum is expensive.
const EXACT_TIE_BITS: i64 = 256;

fn round_up_pow2(x: i64) -> i64 {
    (x.max(16) as u64).next_power_of_two() as i64
}

/// One rigorous sample with the default escalation schedule.
pub fn eval_distance(spec: &PowerSumSpec, n: u64, target_bits: u32) -> Result<DistanceSample> {
    Evaluator::new(spec, EvalConfig { target_bits, ..EvalConfig::default() }).eval(n)
}

/// Strict comparison of the distance with `theta^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Membership {
    pub theta_power: Rational,
    /// `None` when the enclosure straddles `theta^n`.
    pub in_m: Option<bool>,
}

fn compare(sample: &DistanceSample, tp: &Rational) -> Option<bool> {
    if cmp_rational(&sample.dist_hi, tp).is_lt() {
        Some(true)
    } else if cmp_rational(&sample.dist_lo, tp).is_ge() {
        Some(false)
    } else {
        None
    }
}

/// Compare `||a_n||` with `theta_power`, doubling the target precision
/// while the enclosure straddles it.
pub fn decide_membership(
    ev: &Evaluator,
    n: u64,
    theta_power: &Rational,
    config: EvalConfig,
) -> Result<(DistanceSample, Option<bool>)> {
    let mut s = ev.eval(n)?;
    let mut in_m = compare(&s, theta_power);
    let mut target = config.target_bits;
    let mut tries = 0;
    while in_m.is_none() && tries < config.max_escalations {
        target *= 2;
        tries += 1;
        s = ev.eval_with_target(n, target)?;
        in_m = compare(&s, theta_power);
    }
    Ok((s, in_m))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub samples: Vec<DistanceSample>,
    /// `ln(distance) / n` from the enclosure midpoint, for decided
    /// samples with positive distance.
    pub rate_estimates: Vec<Option<f64>>,
    pub theta: Option<Rational>,
    pub comparison: Option<Vec<Membership>>,
}

impl ScanReport {
    /// Indices certified to lie in `M_theta`.
    pub fn members(&self) -> Vec<u64> {
        match &self.comparison {
            None => Vec::new(),
            Some(c) => self.samples.iter().zip(c).filter(|(_, m)| m.in_m == Some(true)).map(|(s, _)| s.n).collect(),
        }
    }

    pub fn undecided(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self.samples.iter().filter(|s| !s.decided).map(|s| s.n).collect();
        if let Some(c) = &self.comparison {
            for (s, m) in self.samples.iter().zip(c) {
                if m.in_m.is_none() && s.decided {
                    out.push(s.n);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// CSV with columns `n,p,dist_lo,dist_hi,decided,theta_power,in_M`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,p,dist_lo,dist_hi,decided,theta_power,in_M\n");
        for (i, s) in self.samples.iter().enumerate() {
            let (tp, inm) = match &self.comparison {
                None => (String::new(), String::new()),
                Some(c) => (
                    format_sig(&c[i].theta_power, 20),
                    match c[i].in_m {
                        Some(true) => "true".into(),
                        Some(false) => "false".into(),
                        None => "undecided".into(),
                    },
                ),
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.n,
                s.p,
                format_sig(&s.dist_lo, 20),
                format_sig(&s.dist_hi, 20),
                s.decided,
                tp,
                inm
            );
        }
        out
    }
}

/// Samples for `n_from..=n_to`, in parallel, and membership in `M_theta`
/// when `theta` is given. Straddling comparisons are re-evaluated at
/// higher precision before being reported undecided.
pub fn scan(
    spec: &PowerSumSpec,
    n_from: u64,
    n_to: u64,
    theta: Option<&Rational>,
    config: EvalConfig,
) -> Result<ScanReport> {
    if n_from < 1 || n_from > n_to {
        return Err(Error::invalid(format!("invalid range {n_from}..{n_to}")));
    }
    if let Some(t) = theta {
        if !t.is_positive() {
            return Err(Error::invalid("theta must be positive"));
        }
    }
    let ev = Evaluator::new(spec, config);
    let rows: Vec<(DistanceSample, Option<Membership>)> = (n_from..=n_to)
        .into_par_iter()
        .map(|n| -> Result<_> {
            let Some(t) = theta else { return Ok((ev.eval(n)?, None)) };
            let tp = num_traits::pow(t.clone(), n as usize);
            let (s, in_m) = decide_membership(&ev, n, &tp, config)?;
            Ok((s, Some(Membership { theta_power: tp, in_m })))
        })
        .collect::<Result<_>>()?;
    let mut samples = Vec::with_capacity(rows.len());
    let mut comparison = theta.map(|_| Vec::with_capacity(rows.len()));
    for (s, m) in rows {
        samples.push(s);
        if let (Some(c), Some(m)) = (comparison.as_mut(), m) {
            c.push(m);
        }
    }
    let rate_estimates = samples
        .iter()
        .map(|s| {
            let mid = s.midpoint();
            (s.decided && mid.is_positive()).then(|| ln_f64(&mid) / s.n as f64)
        })
        .collect();
    Ok(ScanReport { samples, rate_estimates, theta: theta.cloned(), comparison })
}

/// Natural log of a positive rational in floating point, safe for tiny values.
fn ln_f64(r: &Rational) -> f64 {
    let nb = r.numer().bits() as i64;
    let db = r.denom().bits() as i64;
    let shift = nb - db;
    let scaled = if shift >= 0 {
        r / Rational::from_integer(BigInt::one() << shift as usize)
    } else {
        r * Rational::from_integer(BigInt::one() << (-shift) as usize)
    };
    scaled.to_f64().unwrap_or(1.0).ln() + shift as f64 * std::f64::consts::LN_2
}

#[derive(Clone, Debug, PartialEq)]
pub struct WaringRow {
    pub k: u32,
    /// `2^k + floor((3/2)^k) - 2`.
    pub g: BigInt,
    pub floor_term: BigInt,
    pub distance: DistanceSample,
}

/// Exact table of `g(k)` for `k = 1..=k_max` with `||(3/2)^k||`.
pub fn waring_check(k_max: u32) -> Result<Vec<WaringRow>> {
    if !(1..=64).contains(&k_max) {
        return Err(Error::invalid("k_max must lie in 1..=64"));
    }
    let three_halves = Rational::new(BigInt::from(3), BigInt::from(2));
    Ok((1..=k_max)
        .map(|k| {
            let x = num_traits::pow(three_halves.clone(), k as usize);
            let floor_term = x.floor().to_integer();
            let g = (BigInt::one() << k as usize) + &floor_term - 2;
            WaringRow { k, g, floor_term, distance: DistanceSample::exact(k as u64, &x) }
        })
        .collect())
}
