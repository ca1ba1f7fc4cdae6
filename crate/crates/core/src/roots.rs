//! Certified isolation and refinement of the complex roots of squarefree
//! integer polynomials.
//!
//! Approximations come from the Aberth iteration, first in `f64` and then
//! in dyadic arithmetic at growing precision. A set of approximations is
//! accepted once Gerschgorin disks built from Weierstrass corrections,
//! evaluated in interval arithmetic, are pairwise disjoint: each disk then
//! holds exactly one root. Real roots are recognised because their disk is
//! centred on the real axis, and are returned with a degenerate `[0, 0]`
//! imaginary part.

use crate::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};
use crate::interval::{CInterval, Interval};
use crate::intpoly::{is_squarefree, sign_at};
use crate::IntPolynomial;
use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::ToPrimitive;
use std::cmp::Ordering;

const MAX_PREC: u32 = 1 << 15;

/// Approximate complex arithmetic used by the Aberth iteration.
pub trait ApproxComplex: Clone {
    fn from_f64_parts(re: f64, im: f64, prec: u32) -> Self;
    fn from_int(v: &BigInt, prec: u32) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Option<Self>;
    /// Rough `|z|`, good to a few bits.
    fn norm_estimate(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl ApproxComplex for Complex<f64> {
    fn from_f64_parts(re: f64, im: f64, _prec: u32) -> Self {
        Complex::new(re, im)
    }
    fn from_int(v: &BigInt, _prec: u32) -> Self {
        Complex::new(v.to_f64().unwrap_or(f64::INFINITY), 0.0)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        (o.norm_sqr() != 0.0).then(|| self / o)
    }
    fn norm_estimate(&self) -> f64 {
        self.norm()
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Complex number with dyadic parts, rounded to `prec` bits after each step.
#[derive(Clone, Debug, PartialEq)]
pub struct DComplex {
    pub re: Dyadic,
    pub im: Dyadic,
    pub prec: u32,
}

impl DComplex {
    pub fn new(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        DComplex { re, im, prec }
    }

    fn r(&self, x: Dyadic) -> Dyadic {
        x.round(self.prec, Round::Trunc)
    }

    pub fn conj(&self) -> Self {
        DComplex { re: self.re.clone(), im: -&self.im, prec: self.prec }
    }

    pub fn to_complex(&self) -> Complex<f64> {
        Complex::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        DComplex { re: self.re.round(prec, Round::Trunc), im: self.im.round(prec, Round::Trunc), prec }
    }

    pub fn to_interval(&self) -> CInterval {
        CInterval::point(self.re.clone(), self.im.clone(), self.prec)
    }
}

impl ApproxComplex for DComplex {
    fn from_f64_parts(re: f64, im: f64, prec: u32) -> Self {
        DComplex { re: Dyadic::from_f64(re), im: Dyadic::from_f64(im), prec }
    }
    fn from_int(v: &BigInt, prec: u32) -> Self {
        DComplex { re: Dyadic::from_int(v.clone()), im: Dyadic::zero(), prec }
    }
    fn add(&self, o: &Self) -> Self {
        DComplex { re: self.r(&self.re + &o.re), im: self.r(&self.im + &o.im), prec: self.prec }
    }
    fn sub(&self, o: &Self) -> Self {
        DComplex { re: self.r(&self.re - &o.re), im: self.r(&self.im - &o.im), prec: self.prec }
    }
    fn mul(&self, o: &Self) -> Self {
        let re = &(&self.re * &o.re) - &(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        DComplex { re: self.r(re), im: self.r(im), prec: self.prec }
    }
    fn div(&self, o: &Self) -> Option<Self> {
        let den = &(&o.re * &o.re) + &(&o.im * &o.im);
        if den.is_zero() {
            return None;
        }
        let re = &(&self.re * &o.re) + &(&self.im * &o.im);
        let im = &(&self.im * &o.re) - &(&self.re * &o.im);
        Some(DComplex {
            re: re.div(&den, self.prec, Round::Trunc),
            im: im.div(&den, self.prec, Round::Trunc),
            prec: self.prec,
        })
    }
    fn norm_estimate(&self) -> f64 {
        let a = self.re.abs();
        let b = self.im.abs();
        let m = Dyadic::max(&a, &b);
        match m.ilog2() {
            None => 0.0,
            Some(e) if e > 1000 => f64::INFINITY,
            Some(e) if e < -1000 => 0.0,
            Some(_) => self.re.to_f64().hypot(self.im.to_f64()),
        }
    }
    fn is_finite(&self) -> bool {
        true
    }
}

fn eval_pair<C: ApproxComplex>(coeffs: &[C], z: &C) -> (C, C) {
    let n = coeffs.len() - 1;
    let mut p = coeffs[n].clone();
    // zero at the working precision of the coefficients
    let mut dp = p.sub(&p);
    for c in coeffs[..n].iter().rev() {
        dp = dp.mul(z).add(&p);
        p = p.mul(z).add(c);
    }
    (p, dp)
}

/// Cauchy-style bound on root moduli, used to seed the iteration.
fn root_radius(p: &IntPolynomial) -> f64 {
    let n = p.deg();
    let lc = p.leading().unwrap().to_f64().unwrap_or(f64::INFINITY).abs();
    let mut r: f64 = 0.0;
    for (i, c) in p.coeffs()[..n].iter().enumerate() {
        let v = c.to_f64().unwrap_or(f64::INFINITY).abs();
        if v > 0.0 {
            r = r.max((v / lc).powf(1.0 / (n - i) as f64));
        }
    }
    (2.0 * r).max(1e-3)
}

fn initial_points<C: ApproxComplex>(p: &IntPolynomial, prec: u32) -> Vec<C> {
    let n = p.deg();
    let r = root_radius(p);
    (0..n)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.7;
            C::from_f64_parts(r * t.cos(), r * t.sin(), prec)
        })
        .collect()
}

/// Run the Aberth iteration from `start`; returns the approximations and
/// whether the corrections fell below `tol` relative to the root size.
pub fn aberth<C: ApproxComplex>(
    p: &IntPolynomial,
    start: Vec<C>,
    prec: u32,
    tol: f64,
    max_iter: usize,
) -> (Vec<C>, bool) {
    let coeffs: Vec<C> = p.coeffs().iter().map(|c| C::from_int(c, prec)).collect();
    let mut z = start;
    let n = z.len();
    let one = C::from_f64_parts(1.0, 0.0, prec);
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (pv, dv) = eval_pair(&coeffs, &z[i]);
            let Some(ratio) = pv.div(&dv) else {
                // stationary point: nudge and retry
                z[i] = z[i].add(&C::from_f64_parts(1e-3, 1e-3, prec));
                all_done = false;
                continue;
            };
            let mut s = C::from_f64_parts(0.0, 0.0, prec);
            for j in 0..n {
                if j != i {
                    if let Some(inv) = one.div(&z[i].sub(&z[j])) {
                        s = s.add(&inv);
                    }
                }
            }
            let den = one.sub(&ratio.mul(&s));
            let step = ratio.div(&den).unwrap_or(ratio);
            let size = step.norm_estimate();
            z[i] = z[i].sub(&step);
            if !z[i].is_finite() {
                return (z, false);
            }
            if size <= tol * (1.0 + z[i].norm_estimate()) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            return (z, true);
        }
    }
    (z, false)
}

/// Root approximations in `f64`, if the iteration converges.
pub fn approx_roots_f64(p: &IntPolynomial) -> Option<Vec<Complex<f64>>> {
    if p.deg() == 0 {
        return Some(Vec::new());
    }
    let start = initial_points::<Complex<f64>>(p, 53);
    let (z, ok) = aberth(p, start, 53, 1e-14, 800);
    ok.then_some(z)
}

/// Relative gap below which `f64` approximations are too close to seed
/// the dyadic iteration: coincident seeds never separate.
const MIN_SEED_GAP: f64 = 1e-10;

fn separated_seeds(p: &IntPolynomial) -> Option<Vec<Complex<f64>>> {
    let z = approx_roots_f64(p)?;
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if (z[i] - z[j]).norm() <= MIN_SEED_GAP * z[i].norm().max(z[j].norm()).max(1.0) {
                return None;
            }
        }
    }
    Some(z)
}

/// Force the approximations into a conjugate-symmetric configuration.
/// Returns `(real, upper)` indices into the adjusted vector.
fn symmetrize(z: &mut [DComplex]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = z.len();
    let c: Vec<Complex<f64>> = z.iter().map(|v| v.to_complex()).collect();
    // differences are formed before rounding to f64, so roots closer than
    // an f64 ulp of their size still get told apart
    let to_conj = |i: usize, j: usize| z[i].sub(&z[j].conj()).to_complex().norm();
    let mut real = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for i in 0..n {
        let self_dist = 2.0 * c[i].im.abs();
        let other = (0..n)
            .filter(|&j| j != i)
            .map(|j| to_conj(i, j))
            .fold(f64::INFINITY, f64::min);
        if self_dist < other {
            real.push(i);
        } else if c[i].im > 0.0 {
            upper.push(i);
        } else {
            lower.push(i);
        }
    }
    if upper.len() != lower.len() {
        return None;
    }
    let mut used = vec![false; n];
    let mut pairs = Vec::new();
    for &i in &upper {
        let j = lower
            .iter()
            .copied()
            .filter(|&j| !used[j])
            .min_by(|&a, &b| to_conj(i, a).partial_cmp(&to_conj(i, b)).unwrap_or(Ordering::Equal))?;
        used[j] = true;
        pairs.push((i, j));
    }
    for &i in &real {
        z[i].im = Dyadic::zero();
    }
    for (i, j) in pairs {
        z[j] = z[i].conj();
    }
    Some((real, upper))
}

/// Try to certify the approximations; on success returns one box per root.
fn certify(p: &IntPolynomial, z: &[DComplex], real: &[usize], upper: &[usize], prec: u32) -> Option<Vec<CInterval>> {
    let n = z.len();
    let lc = CInterval::from_int(p.leading().unwrap().clone(), prec);
    let pts: Vec<CInterval> = z.iter().map(|v| CInterval::point(v.re.clone(), v.im.clone(), prec)).collect();
    let rad_factor = Dyadic::from_int((n - 1) as i64);
    let mut boxes = Vec::with_capacity(n);
    let mut covers = Vec::with_capacity(n);
    let disk = |i: usize| -> Option<(CInterval, Dyadic)> {
        let pv = p.eval_with(&pts[i], |c| CInterval::from_int(c.clone(), prec));
        let mut den = lc.clone();
        for j in 0..n {
            if j != i {
                den = &den * &(&pts[i] - &pts[j]);
            }
        }
        let w = pv.div(&den)?;
        let r = (&w.abs().hi().clone() * &rad_factor).round(prec, Round::Ceil);
        Some((&pts[i] - &w, r))
    };
    for &i in real {
        let (c, r) = disk(i)?;
        let re = c.re.inflate(&r);
        covers.push(CInterval::new(re.clone(), Interval::new(-&r, r.clone(), prec)));
        boxes.push(CInterval::real(re));
    }
    for &i in upper {
        let (c, r) = disk(i)?;
        let b = c.inflate(&r);
        covers.push(b.clone());
        covers.push(b.conj());
        boxes.push(b.clone());
        boxes.push(b.conj());
    }
    for a in 0..covers.len() {
        for b in a + 1..covers.len() {
            if covers[a].intersects(&covers[b]) {
                return None;
            }
        }
    }
    Some(boxes)
}

/// Order boxes by real part then imaginary part of their midpoints.
pub fn sort_boxes(boxes: &mut [CInterval]) {
    boxes.sort_by(|a, b| {
        let (ar, ai) = a.mid();
        let (br, bi) = b.mid();
        ar.cmp(&br).then(ai.cmp(&bi))
    });
}

/// Certified isolating boxes for the roots of a squarefree polynomial,
/// sorted by real then imaginary part.
pub fn isolate(p: &IntPolynomial) -> Result<Vec<CInterval>> {
    let n = p.degree().ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if n == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    if !is_squarefree(p) {
        return Err(Error::InvalidInput("polynomial is not squarefree".into()));
    }
    if n == 1 {
        let c = p.coeffs();
        let r = crate::Rational::new(-c[0].clone(), c[1].clone());
        return Ok(vec![CInterval::real(Interval::from_rational(&r, 64))]);
    }
    let mut prec = 64u32;
    let mut z: Vec<DComplex> = match separated_seeds(p) {
        Some(z) => z.iter().map(|c| DComplex::from_f64_parts(c.re, c.im, prec)).collect(),
        None => {
            prec = 128;
            let start = initial_points::<DComplex>(p, prec);
            aberth(p, start, prec, 2f64.powi(-100), 2000).0
        }
    };
    loop {
        let tol = 2f64.powi(-(prec as i32 - 8).min(1000));
        let (next, _) = aberth(p, z.iter().map(|v| v.with_prec(prec)).collect(), prec, tol, 200);
        z = next;
        let mut sym = z.clone();
        if let Some((real, upper)) = symmetrize(&mut sym) {
            if let Some(mut boxes) = certify(p, &sym, &real, &upper, prec) {
                sort_boxes(&mut boxes);
                return Ok(boxes);
            }
        }
        if prec >= MAX_PREC {
            return Err(Error::Internal("root isolation did not converge".into()));
        }
        prec *= 2;
    }
}

pub fn is_real_box(b: &CInterval) -> bool {
    b.im.is_point() && b.im.lo().is_zero()
}

fn dyadic_sign(p: &IntPolynomial, x: &Dyadic) -> i32 {
    sign_at(p, &x.to_rational())
}

fn width_ok(w: &Dyadic, target: i64) -> bool {
    w.ilog2().is_none_or(|e| e < -target)
}

/// Newton iteration on a real approximation, in dyadic arithmetic.
fn newton_real(p: &IntPolynomial, dp: &IntPolynomial, mut x: Dyadic, wp: u32, steps: usize) -> Option<Dyadic> {
    for _ in 0..steps {
        let ev = |q: &IntPolynomial| {
            let mut acc = Dyadic::zero();
            for c in q.coeffs().iter().rev() {
                acc = (&(&acc * &x) + &Dyadic::from_int(c.clone())).round(wp, Round::Trunc);
            }
            acc
        };
        let fx = ev(p);
        let dfx = ev(dp);
        if dfx.is_zero() {
            return None;
        }
        let step = fx.div(&dfx, wp, Round::Trunc);
        x = (&x - &step).round(wp, Round::Trunc);
        if step.is_zero() {
            break;
        }
    }
    Some(x)
}

/// Shrink an isolating real interval to width below `2^-target`.
pub fn refine_real(p: &IntPolynomial, iv: &Interval, target: i64) -> Interval {
    let mut lo = iv.lo().clone();
    let mut hi = iv.hi().clone();
    let prec = iv.prec().max((target + 64).clamp(64, u32::MAX as i64 / 2) as u32);
    if lo == hi {
        return iv.clone();
    }
    let s_lo = dyadic_sign(p, &lo);
    if s_lo == 0 {
        return Interval::point(lo, prec);
    }
    if dyadic_sign(p, &hi) == 0 {
        return Interval::point(hi, prec);
    }
    let dp = p.derivative();
    while !width_ok(&(&hi - &lo), target) {
        let wp = (target.max(0) as u32) * 2 + 64;
        if let Some(x) = newton_real(p, &dp, Dyadic::midpoint(&lo, &hi), wp, 40) {
            let delta = Dyadic::pow2(-target - 2);
            let a = &x - &delta;
            let b = &x + &delta;
            if lo <= a && b <= hi {
                let sa = dyadic_sign(p, &a);
                let sb = dyadic_sign(p, &b);
                if sa == 0 {
                    return Interval::point(a, prec);
                }
                if sb == 0 {
                    return Interval::point(b, prec);
                }
                if sa != sb {
                    lo = a;
                    hi = b;
                    continue;
                }
            }
        }
        // bisection steps, then give Newton another try
        for _ in 0..8 {
            let m = Dyadic::midpoint(&lo, &hi);
            let sm = dyadic_sign(p, &m);
            if sm == 0 {
                return Interval::point(m, prec);
            }
            if sm == s_lo {
                lo = m;
            } else {
                hi = m;
            }
        }
    }
    Interval::new(lo, hi, prec)
}

fn horner_c(p: &IntPolynomial, x: &CInterval) -> CInterval {
    let prec = x.prec();
    p.eval_with(x, |c| CInterval::from_int(c.clone(), prec))
}

/// Krawczyk test: `Some(K)` when `X` provably contains exactly one root of
/// `p`, with the root inside `K`.
pub fn krawczyk(p: &IntPolynomial, dp: &IntPolynomial, x: &CInterval) -> Option<CInterval> {
    let prec = x.prec();
    let (cr, ci) = x.mid();
    let c = CInterval::point(cr.clone(), ci.clone(), prec);
    let pc = horner_c(p, &c);
    let dpc = horner_c(dp, &c);
    let (dr, di) = dpc.mid();
    let dapprox = DComplex::new(dr, di, prec);
    let y = DComplex::from_f64_parts(1.0, 0.0, prec).div(&dapprox)?;
    let y = y.to_interval();
    let one = CInterval::from_int(1, prec);
    let k = &(&c - &(&y * &pc)) + &(&(&one - &(&y * &horner_c(dp, x))) * &(x - &c));
    (k.re.strictly_inside(&x.re) && k.im.strictly_inside(&x.im)).then_some(k)
}

fn newton_complex(p: &IntPolynomial, dp: &IntPolynomial, z: DComplex, steps: usize) -> Option<DComplex> {
    let prec = z.prec;
    let pc: Vec<DComplex> = p.coeffs().iter().map(|c| DComplex::from_int(c, prec)).collect();
    let dc: Vec<DComplex> = dp.coeffs().iter().map(|c| DComplex::from_int(c, prec)).collect();
    let ev = |cs: &[DComplex], x: &DComplex| {
        let mut acc = DComplex::from_f64_parts(0.0, 0.0, prec);
        for c in cs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    };
    let mut x = z;
    for _ in 0..steps {
        let step = ev(&pc, &x).div(&ev(&dc, &x))?;
        x = x.sub(&step);
        if step.re.is_zero() && step.im.is_zero() {
            break;
        }
    }
    Some(x)
}

/// Shrink an isolating complex box (not on the real axis) to width below
/// `2^-target`.
pub fn refine_complex(p: &IntPolynomial, b: &CInterval, target: i64) -> Result<CInterval> {
    let dp = p.derivative();
    let mut cur = b.clone();
    let mut prec = cur.prec().max((2 * target.max(0) + 64) as u32);
    while !width_ok(&cur.width(), target) {
        let (mr, mi) = cur.mid();
        let z0 = DComplex::new(mr, mi, prec);
        if let Some(z) = newton_complex(p, &dp, z0, 60) {
            let half = Dyadic::pow2(-target - 2);
            let cand = CInterval::new(
                Interval::new(&z.re - &half, &z.re + &half, prec),
                Interval::new(&z.im - &half, &z.im + &half, prec),
            );
            if cand.subset_of(&cur) && krawczyk(p, &dp, &cand).is_some() {
                cur = cand;
                break;
            }
        }
        // fall back to isolating at a tighter tolerance and intersecting
        let boxes = isolate_at(p, prec * 2)?;
        let hits: Vec<&CInterval> = boxes.iter().filter(|x| x.intersects(&cur)).collect();
        if hits.len() == 1 {
            let h = hits[0];
            cur = CInterval::new(
                cur.re.intersect(&h.re).unwrap(),
                cur.im.intersect(&h.im).unwrap(),
            );
        }
        prec *= 2;
        if prec > MAX_PREC {
            return Err(Error::Internal("complex root refinement stalled".into()));
        }
    }
    Ok(cur)
}

/// Isolation starting directly at the given working precision.
fn isolate_at(p: &IntPolynomial, prec: u32) -> Result<Vec<CInterval>> {
    let z0 = separated_seeds(p)
        .map(|z| z.iter().map(|c| DComplex::from_f64_parts(c.re, c.im, prec)).collect())
        .unwrap_or_else(|| initial_points::<DComplex>(p, prec));
    let mut prec = prec;
    let mut z = z0;
    loop {
        let tol = 2f64.powi(-(prec as i32 - 8).min(1000));
        z = aberth(p, z.iter().map(|v| v.with_prec(prec)).collect(), prec, tol, 400).0;
        let mut sym = z.clone();
        if let Some((real, upper)) = symmetrize(&mut sym) {
            if let Some(boxes) = certify(p, &sym, &real, &upper, prec) {
                return Ok(boxes);
            }
        }
        if prec >= MAX_PREC {
            return Err(Error::Internal("root isolation did not converge".into()));
        }
        prec *= 2;
    }
}

/// Refine any isolating box of a root of squarefree `p`.
pub fn refine(p: &IntPolynomial, b: &CInterval, target: i64) -> Result<CInterval> {
    if width_ok(&b.width(), target) {
        return Ok(b.clone());
    }
    if is_real_box(b) {
        Ok(CInterval::real(refine_real(p, &b.re, target)))
    } else {
        refine_complex(p, b, target)
    }
}

/// True when `h` provably contains at most one root of `p` (real boxes:
/// `p'` has no zero on the interval; complex boxes: Krawczyk).
pub fn unique_root_in(p: &IntPolynomial, h: &CInterval) -> bool {
    let dp = p.derivative();
    if is_real_box(h) {
        let d = dp.eval_with(&h.re, |c| Interval::from_int(c.clone(), h.re.prec()));
        !d.contains_zero()
    } else {
        krawczyk(p, &dp, h).is_some()
    }
}
