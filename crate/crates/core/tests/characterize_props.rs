mod common;

use common::*;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use power_sum_lab::algebraic::{alg_equals, compare_modulus_to_one, conjugates_of, AlgebraicNumber};
use power_sum_lab::characterize::{
    construct_witness, decide_existence, DecisionCertificate, Existence, FailureReason, Theta0,
};
use power_sum_lab::scalar::cmp_rational;
use power_sum_lab::structure::{torsion_ratio, PowerSumSpec};
use power_sum_lab::trajectory::{eval_distance, EvalConfig, Evaluator};
use power_sum_lab::Rational;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use std::cmp::Ordering;

/// Decay rate of the no-decay scan for rational bases.
const NO_DECAY_THETA: (i64, i64) = (9, 10);

/// Slack allowed above the witness bound: the two enclosures are computed
/// independently, so a distance equal to the bound may overshoot it by
/// their combined widths.
const WITNESS_SLACK_BITS: u32 = 60;

/// Conjugates of a random algebraic integer that lie on or outside the
/// unit circle. The remaining conjugates are inside, so existence holds
/// by construction.
fn outside_conjugates(seed: u64) -> Option<Vec<AlgebraicNumber>> {
    let mut r = rng(seed);
    let f = random_monic_irreducible(&mut r, 3, 5);
    let roots = AlgebraicNumber::roots_of(&f).unwrap();
    let out: Vec<AlgebraicNumber> =
        roots.into_iter().filter(|x| compare_modulus_to_one(x).unwrap() != Ordering::Less).collect();
    (!out.is_empty()).then_some(out)
}

fn theta_hi(c: &DecisionCertificate) -> Rational {
    match &c.theta0 {
        Theta0::Zero => Rational::zero(),
        Theta0::Value { hi, .. } => hi.clone(),
    }
}

fn same_theta(a: &Theta0, b: &Theta0) -> bool {
    match (a, b) {
        (Theta0::Zero, Theta0::Zero) => true,
        (Theta0::Value { number: x, .. }, Theta0::Value { number: y, .. }) => alg_equals(x, y),
        _ => false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn witness_bounds_hold(seed in any::<u64>()) {
        let alphas = outside_conjugates(seed);
        prop_assume!(alphas.is_some());
        let cert = decide_existence(&alphas.unwrap()).unwrap();
        prop_assert_eq!(cert.verdict, Existence::Exists);
        prop_assert!(cmp_rational(&theta_hi(&cert), &Rational::one()).is_lt());
        let slack = Rational::new(BigInt::one(), BigInt::one() << WITNESS_SLACK_BITS);
        for n in [10u64, 20, 30] {
            let w = construct_witness(&cert, n).unwrap();
            let spec = PowerSumSpec::unit_coefficients(w.alphas.clone()).unwrap();
            let d = eval_distance(&spec, n, 128).unwrap();
            prop_assert!(cmp_rational(&d.dist_hi, &(&w.distance_bound.1 + &slack)).is_le(), "n = {}", n);
        }
    }

    #[test]
    fn theta0_controls_the_witness(seed in any::<u64>()) {
        let alphas = outside_conjugates(seed);
        prop_assume!(alphas.is_some());
        let cert = decide_existence(&alphas.unwrap()).unwrap();
        let w = construct_witness(&cert, 1).unwrap();
        let e = Rational::from_integer(cert.extra_conjugates().len().into());
        let th = theta_hi(&cert);
        let spec = PowerSumSpec::unit_coefficients(w.alphas).unwrap();
        let ev = Evaluator::new(&spec, EvalConfig::default());
        for n in 1..=80u64 {
            let d = ev.eval(n).unwrap();
            let bound = &e * num_traits::pow(th.clone(), n as usize);
            prop_assert!(cmp_rational(&d.dist_lo, &bound).is_le(), "n = {}", n);
        }
    }

    #[test]
    fn invariant_under_permutation_and_conjugate_swap(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut alphas: Vec<AlgebraicNumber> = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let a = if r.gen_bool(0.6) {
                let f = random_monic_irreducible(&mut r, 2, 4);
                let roots = AlgebraicNumber::roots_of(&f).unwrap();
                roots[r.gen_range(0..roots.len())].clone()
            } else {
                random_algebraic(&mut r, 2, 5)
            };
            if compare_modulus_to_one(&a).unwrap() != Ordering::Less && !alphas.iter().any(|x| alg_equals(x, &a)) {
                alphas.push(a);
            }
        }
        prop_assume!(!alphas.is_empty());
        let base = decide_existence(&alphas).unwrap();
        let mut shuffled = alphas.clone();
        shuffled.shuffle(&mut r);
        // swap one entry for a torsion-related conjugate when there is one
        let i = r.gen_range(0..shuffled.len());
        let swap = conjugates_of(&shuffled[i])
            .into_iter()
            .find(|c| !alg_equals(c, &shuffled[i]) && torsion_ratio(c, &shuffled[i]).unwrap().is_some());
        if let Some(c) = swap {
            if !shuffled.iter().any(|x| alg_equals(x, &c)) {
                shuffled[i] = c;
            }
        }
        let other = decide_existence(&shuffled).unwrap();
        prop_assert_eq!(base.verdict, other.verdict);
        prop_assert_eq!(base.exponent_m, other.exponent_m);
        prop_assert!(same_theta(&base.theta0, &other.theta0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn rational_bases_do_not_decay(p in 2i64..=30, qd in 2i64..=9) {
        prop_assume!(p.gcd(&qd) == 1 && p > qd);
        let alpha = q(p, qd);
        let cert = decide_existence(&[AlgebraicNumber::from_rational(alpha.clone())]).unwrap();
        prop_assert_eq!(cert.verdict, Existence::NotExists);
        let non_integral = matches!(cert.failure_reasons[0], FailureReason::NonIntegral { .. });
        prop_assert!(non_integral);
        // exact oracle: ||alpha^n|| / theta^n exceeds one somewhere in 41..=60
        let theta = q(NO_DECAY_THETA.0, NO_DECAY_THETA.1);
        let half = q(1, 2);
        let grows = (41..=60usize).any(|n| {
            let x = num_traits::pow(alpha.clone(), n);
            let near = (&x + &half).floor();
            let d = if (&x - &near) < Rational::zero() { &near - &x } else { &x - &near };
            cmp_rational(&d, &num_traits::pow(theta.clone(), n)).is_gt()
        });
        prop_assert!(grows);
    }
}

#[test]
fn degree_one_failure_reason_names_the_base() {
    let cert = decide_existence(&[AlgebraicNumber::from_rational(q(3, 2))]).unwrap();
    match &cert.failure_reasons[..] {
        [FailureReason::NonIntegral { alpha, .. }] => assert_eq!(alpha.rational_value(), Some(&q(3, 2))),
        other => panic!("{other:?}"),
    }
}

#[test]
fn golden_ratio_plus_root_of_unity_multiple() {
    // phi and -phi: the reduction squares both and merges them
    let cert = decide_existence(&[phi(), power_sum_lab::algebraic::alg_neg(&phi())]).unwrap();
    assert_eq!(cert.verdict, Existence::Exists);
    assert_eq!(cert.exponent_m, 2);
}
