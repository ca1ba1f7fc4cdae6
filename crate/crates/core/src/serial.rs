//! JSON formats for inputs, certificates and decompositions.
//!
//! Rationals are strings `"p/q"`. An algebraic number is
//! `{"minpoly": [c0, c1, ...], "root": {"re": [lo, hi], "im": [lo, hi]}}`
//! or `{"rational": "p/q"}`; `{"minpoly": [...], "near": [re, im]}` picks
//! the root closest to a floating-point guess.

use crate::algebraic::{AlgebraicNumber, ComplexBox};
use crate::characterize::{DecisionCertificate, Existence, FailureReason, Theta0};
use crate::decimal::{format_sig, format_sig_up, parse_rational, rational_string};
use crate::error::{Error, Result};
use crate::heights::{BudgetForm, SublinearBudget};
use crate::sml::{BoundaryCase, Decomposition, Progression, RecurrenceSpec, RecurrenceTerm};
use crate::structure::{PowerSumSpec, Term};
use crate::{Poly, Rational};
use num_bigint::BigInt;
use num_traits::Signed;
use serde_json::{json, Map, Value};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field \"{key}\"")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

fn uint(v: &Value, what: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| parse_err(format!("{what} must be a nonnegative integer")))
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(rational_string(r))
}

/// A rational given as `"p/q"`, a decimal string or a JSON integer.
pub fn rational_from_json(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| parse_err(format!("bad rational \"{s}\""))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(BigInt::from(n.as_i64().unwrap()))),
        Value::Object(m) if m.contains_key("rational") => rational_from_json(&m["rational"]),
        _ => Err(parse_err(format!("bad rational {v}"))),
    }
}

fn integer_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().unwrap())),
        Value::Number(n) if n.is_u64() => Ok(BigInt::from(n.as_u64().unwrap())),
        Value::String(s) => s.trim().parse().map_err(|_| parse_err(format!("bad integer \"{s}\""))),
        _ => Err(parse_err(format!("bad integer {v}"))),
    }
}

fn pair(lo: &Rational, hi: &Rational) -> Value {
    json!([rational_string(lo), rational_string(hi)])
}

fn pair_from(v: &Value, what: &str) -> Result<(Rational, Rational)> {
    let a = array(v, what)?;
    if a.len() != 2 {
        return Err(parse_err(format!("{what} must have two endpoints")));
    }
    Ok((rational_from_json(&a[0])?, rational_from_json(&a[1])?))
}

pub fn algebraic_to_json(a: &AlgebraicNumber) -> Value {
    if let Some(r) = a.rational_value() {
        return json!({ "rational": rational_string(r) });
    }
    let b = a.root_box();
    let coeffs: Vec<Value> = a
        .minpoly()
        .coeffs()
        .iter()
        .map(|c| match i64::try_from(c) {
            Ok(x) => json!(x),
            Err(_) => Value::String(c.to_string()),
        })
        .collect();
    json!({
        "minpoly": coeffs,
        "root": { "re": pair(&b.re_lo, &b.re_hi), "im": pair(&b.im_lo, &b.im_hi) },
    })
}

pub fn algebraic_from_json(v: &Value) -> Result<AlgebraicNumber> {
    if let Some(r) = v.get("rational") {
        return Ok(AlgebraicNumber::from_rational(rational_from_json(r)?));
    }
    if v.is_string() || v.is_number() {
        return Ok(AlgebraicNumber::from_rational(rational_from_json(v)?));
    }
    let coeffs = array(field(v, "minpoly")?, "minpoly")?.iter().map(integer_from_json).collect::<Result<Vec<_>>>()?;
    let p = Poly::new(coeffs);
    if let Some(near) = v.get("near") {
        let a = array(near, "near")?;
        let re = a.first().and_then(Value::as_f64).ok_or_else(|| parse_err("near needs [re, im]"))?;
        let im = a.get(1).and_then(Value::as_f64).unwrap_or(0.0);
        return AlgebraicNumber::root_near(&p, re, im);
    }
    let root = field(v, "root")?;
    let (re_lo, re_hi) = pair_from(field(root, "re")?, "re")?;
    let (im_lo, im_hi) = pair_from(field(root, "im")?, "im")?;
    AlgebraicNumber::new(p, &ComplexBox::new(re_lo, re_hi, im_lo, im_hi)?)
}

/// A list of algebraic numbers: a bare array or `{"tuple": [...]}` /
/// `{"alphas": [...]}`.
pub fn algebraic_list_from_json(v: &Value) -> Result<Vec<AlgebraicNumber>> {
    let list = match v {
        Value::Array(a) => a,
        _ => {
            let inner = v.get("tuple").or_else(|| v.get("alphas")).ok_or_else(|| parse_err("expected a list of numbers"))?;
            array(inner, "tuple")?
        }
    };
    list.iter().map(algebraic_from_json).collect()
}

pub fn power_sum_to_json(spec: &PowerSumSpec) -> Value {
    let terms: Vec<Value> = spec
        .terms
        .iter()
        .map(|t| json!({ "q": algebraic_to_json(&t.q), "alpha": algebraic_to_json(&t.alpha) }))
        .collect();
    json!({ "terms": terms })
}

/// `{"terms": [{"q": .., "alpha": ..}]}`, or a bare list of bases with
/// unit coefficients.
pub fn power_sum_from_json(v: &Value) -> Result<PowerSumSpec> {
    let Some(terms) = v.get("terms") else {
        return PowerSumSpec::unit_coefficients(algebraic_list_from_json(v)?);
    };
    let terms = array(terms, "terms")?
        .iter()
        .map(|t| {
            let q = match t.get("q") {
                Some(q) => algebraic_from_json(q)?,
                None => AlgebraicNumber::one(),
            };
            Ok(Term { q, alpha: algebraic_from_json(field(t, "alpha")?)? })
        })
        .collect::<Result<Vec<_>>>()?;
    PowerSumSpec::new(terms)
}

pub fn recurrence_to_json(spec: &RecurrenceSpec) -> Value {
    let terms: Vec<Value> = spec
        .terms
        .iter()
        .map(|t| {
            let coeffs: Vec<Value> =
                t.coefficients.iter().map(|c| Value::Array(c.iter().map(rational_to_json).collect())).collect();
            json!({ "alpha": algebraic_to_json(&t.alpha), "coefficients": coeffs })
        })
        .collect();
    json!({ "terms": terms })
}

/// Terms carry `"coefficients"`: one list per power of `n`, each the
/// rational coordinates of a `Q(alpha)` element in powers of `alpha`. A
/// rational `"q"` may stand in for a constant coefficient. A bare list of
/// bases means unit coefficients.
pub fn recurrence_from_json(v: &Value) -> Result<RecurrenceSpec> {
    let Some(terms) = v.get("terms") else {
        let one = vec![vec![Rational::from_integer(1.into())]];
        let terms = algebraic_list_from_json(v)?
            .into_iter()
            .map(|alpha| RecurrenceTerm { alpha, coefficients: one.clone() })
            .collect();
        return RecurrenceSpec::new(terms);
    };
    let terms = array(terms, "terms")?
        .iter()
        .map(|t| {
            let alpha = algebraic_from_json(field(t, "alpha")?)?;
            let coefficients = match (t.get("coefficients"), t.get("q")) {
                (Some(c), _) => array(c, "coefficients")?
                    .iter()
                    .map(|k| array(k, "coefficient")?.iter().map(rational_from_json).collect())
                    .collect::<Result<Vec<_>>>()?,
                (None, Some(q)) => vec![vec![rational_from_json(q)?]],
                (None, None) => vec![vec![Rational::from_integer(1.into())]],
            };
            Ok(RecurrenceTerm { alpha, coefficients })
        })
        .collect::<Result<Vec<_>>>()?;
    RecurrenceSpec::new(terms)
}

pub fn budget_to_json(b: &SublinearBudget) -> Value {
    let form = match b.form {
        BudgetForm::Power => "power",
        BudgetForm::LogShaved => "log_shaved",
    };
    let mut m = Map::new();
    m.insert("form".into(), json!(form));
    m.insert("c".into(), rational_to_json(&b.c));
    if let Some(e) = &b.e {
        m.insert("e".into(), rational_to_json(e));
    }
    Value::Object(m)
}

pub fn budget_from_json(v: &Value) -> Result<SublinearBudget> {
    let c = rational_from_json(field(v, "c")?)?;
    match field(v, "form")?.as_str() {
        Some("power") => SublinearBudget::power(c, rational_from_json(field(v, "e")?)?),
        Some("log_shaved") => SublinearBudget::log_shaved(c),
        _ => Err(parse_err("budget form must be \"power\" or \"log_shaved\"")),
    }
}

/// `[lo, hi]` as a 20-digit decimal midpoint with an error bound that
/// covers both endpoints.
pub fn decimal_with_error(lo: &Rational, hi: &Rational) -> (String, String) {
    let mid = (lo + hi) / Rational::from_integer(2.into());
    let dec = format_sig(&mid, 20);
    let shown = parse_rational(&dec).expect("formatted decimals parse");
    let err = std::cmp::max((&shown - lo).abs(), (hi - &shown).abs());
    (dec, format_sig_up(&err, 3))
}

/// The serialized view of a [`DecisionCertificate`].
#[derive(Clone, Debug, PartialEq)]
pub struct CertificateRecord {
    pub verdict: Existence,
    pub m: u64,
    pub theta0: Theta0,
    /// `theta0^(1/m)`, the rate per original index.
    pub original_rate: Option<(Rational, Rational)>,
    pub extra_conjugates: Vec<AlgebraicNumber>,
    pub failure_reasons: Vec<FailureReason>,
}

impl CertificateRecord {
    pub fn from_certificate(c: &DecisionCertificate) -> Self {
        CertificateRecord {
            verdict: c.verdict,
            m: c.exponent_m,
            theta0: c.theta0.clone(),
            original_rate: c.original_rate(),
            extra_conjugates: c.extra_conjugates(),
            failure_reasons: c.failure_reasons.clone(),
        }
    }
}

pub fn certificate_to_json(c: &CertificateRecord) -> Value {
    let theta0 = match &c.theta0 {
        Theta0::Zero => json!({ "zero": true }),
        Theta0::Value { number, lo, hi } => {
            let (dec, err) = decimal_with_error(lo, hi);
            json!({
                "zero": false,
                "decimal": dec,
                "error": err,
                "enclosure": pair(lo, hi),
                "number": algebraic_to_json(number),
            })
        }
    };
    let rate = match &c.original_rate {
        None => Value::Null,
        Some((lo, hi)) => {
            let (dec, err) = decimal_with_error(lo, hi);
            json!({ "decimal": dec, "error": err, "enclosure": pair(lo, hi) })
        }
    };
    let reasons: Vec<Value> = c
        .failure_reasons
        .iter()
        .map(|r| match r {
            FailureReason::NonIntegral { index, alpha } => {
                json!({ "kind": "non_integral", "index": index, "alpha": algebraic_to_json(alpha) })
            }
            FailureReason::LargeOutsideConjugate { class, beta } => {
                json!({ "kind": "large_outside_conjugate", "class": class, "beta": algebraic_to_json(beta) })
            }
        })
        .collect();
    json!({
        "verdict": serde_json::to_value(c.verdict).expect("enum serializes"),
        "m": c.m,
        "theta0": theta0,
        "original_rate": rate,
        "extra_conjugates": c.extra_conjugates.iter().map(algebraic_to_json).collect::<Vec<_>>(),
        "failure_reasons": reasons,
    })
}

pub fn certificate_from_json(v: &Value) -> Result<CertificateRecord> {
    let verdict: Existence =
        serde_json::from_value(field(v, "verdict")?.clone()).map_err(|e| parse_err(format!("verdict: {e}")))?;
    let m = uint(field(v, "m")?, "m")?;
    let t = field(v, "theta0")?;
    let theta0 = if field(t, "zero")?.as_bool() == Some(true) {
        Theta0::Zero
    } else {
        let (lo, hi) = pair_from(field(t, "enclosure")?, "enclosure")?;
        Theta0::Value { number: algebraic_from_json(field(t, "number")?)?, lo, hi }
    };
    let original_rate = match v.get("original_rate") {
        None | Some(Value::Null) => None,
        Some(r) => Some(pair_from(field(r, "enclosure")?, "enclosure")?),
    };
    let extra_conjugates =
        array(field(v, "extra_conjugates")?, "extra_conjugates")?.iter().map(algebraic_from_json).collect::<Result<_>>()?;
    let failure_reasons = array(field(v, "failure_reasons")?, "failure_reasons")?
        .iter()
        .map(|r| match field(r, "kind")?.as_str() {
            Some("non_integral") => Ok(FailureReason::NonIntegral {
                index: uint(field(r, "index")?, "index")? as usize,
                alpha: algebraic_from_json(field(r, "alpha")?)?,
            }),
            Some("large_outside_conjugate") => Ok(FailureReason::LargeOutsideConjugate {
                class: uint(field(r, "class")?, "class")? as usize,
                beta: algebraic_from_json(field(r, "beta")?)?,
            }),
            _ => Err(parse_err("unknown failure reason")),
        })
        .collect::<Result<_>>()?;
    Ok(CertificateRecord { verdict, m, theta0, original_rate, extra_conjugates, failure_reasons })
}

pub fn decomposition_to_json(d: &Decomposition) -> Value {
    let boundary: Vec<Value> = d
        .boundary
        .iter()
        .map(|b| {
            json!({
                "n": b.n,
                "dist": pair(&b.dist_lo, &b.dist_hi),
                "theta_power": rational_string(&b.theta_power),
            })
        })
        .collect();
    json!({
        "theta_tilde": rational_string(&d.theta_tilde),
        "threshold": d.threshold,
        "exceptional": d.exceptional,
        "progressions": d.progressions,
        "certified": d.certified,
        "preperiod": d.preperiod,
        "period": d.period,
        "m": d.exponent_m,
        "scan_limit": d.scan_limit,
        "mismatches": d.mismatches,
        "boundary": boundary,
        "note": d.note,
    })
}

fn uint_list(v: &Value, what: &str) -> Result<Vec<u64>> {
    array(v, what)?.iter().map(|x| uint(x, what)).collect()
}

pub fn decomposition_from_json(v: &Value) -> Result<Decomposition> {
    let progressions: Vec<Progression> =
        serde_json::from_value(field(v, "progressions")?.clone()).map_err(|e| parse_err(format!("progressions: {e}")))?;
    let opt_u = |k: &str, default: u64| v.get(k).map_or(Ok(default), |x| uint(x, k));
    let boundary = match v.get("boundary") {
        None => Vec::new(),
        Some(b) => array(b, "boundary")?
            .iter()
            .map(|b| {
                let (dist_lo, dist_hi) = pair_from(field(b, "dist")?, "dist")?;
                Ok(BoundaryCase {
                    n: uint(field(b, "n")?, "n")?,
                    dist_lo,
                    dist_hi,
                    theta_power: rational_from_json(field(b, "theta_power")?)?,
                })
            })
            .collect::<Result<_>>()?,
    };
    let threshold = uint(field(v, "threshold")?, "threshold")?;
    Ok(Decomposition {
        theta_tilde: rational_from_json(field(v, "theta_tilde")?)?,
        threshold,
        exceptional: uint_list(field(v, "exceptional")?, "exceptional")?,
        progressions,
        preperiod: opt_u("preperiod", 0)?,
        period: opt_u("period", 1)?,
        exponent_m: opt_u("m", 1)?,
        certified: field(v, "certified")?.as_bool().ok_or_else(|| parse_err("certified must be a boolean"))?,
        scan_limit: opt_u("scan_limit", threshold.saturating_sub(1))?,
        mismatches: v.get("mismatches").map_or(Ok(Vec::new()), |x| uint_list(x, "mismatches"))?,
        boundary,
        note: v.get("note").and_then(Value::as_str).map(str::to_string),
    })
}
