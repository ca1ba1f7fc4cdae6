mod common;

use common::*;
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use power_sum_lab::algebraic::{
    alg_arith, alg_equals, alg_inv, complex_conjugate_of, compare_modulus_to_one, conjugates_of, root_of_unity_order,
    AlgebraicNumber, ArithOp, ComplexBox,
};
use power_sum_lab::factor::factor_over_rationals;
use power_sum_lab::intpoly::{cyclotomic, int_poly, primitive_part};
use power_sum_lab::roots::isolate;
use power_sum_lab::{IntPolynomial, Poly};
use proptest::prelude::*;
use rand::Rng;
use std::cmp::Ordering;

fn add(a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
    alg_arith(a, b, ArithOp::Add).unwrap()
}
fn mul(a: &AlgebraicNumber, b: &AlgebraicNumber) -> AlgebraicNumber {
    alg_arith(a, b, ArithOp::Mul).unwrap()
}

fn unit_circle_sample(seed: u64) -> AlgebraicNumber {
    let mut r = rng(seed);
    match r.gen_range(0..4) {
        0 => {
            let t = [1u64, 2, 3, 4, 5, 6, 8, 10, 12][r.gen_range(0..9)];
            let roots = AlgebraicNumber::roots_of(&cyclotomic(t)).unwrap();
            roots[r.gen_range(0..roots.len())].clone()
        }
        // (3 + 4i) / 5 and its relatives: modulus one, not a root of unity
        1 => AlgebraicNumber::root_near(&int_poly(&[5, -6, 5]), 0.6, if r.gen() { 0.8 } else { -0.8 }).unwrap(),
        _ => random_algebraic(&mut r, 4, 10),
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn field_laws(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_algebraic(&mut r, 2, 10);
        let b = random_algebraic(&mut r, 2, 10);
        let c = random_algebraic(&mut r, 2, 6);
        prop_assert!(alg_equals(&add(&a, &b), &add(&b, &a)));
        prop_assert!(alg_equals(&mul(&a, &b), &mul(&b, &a)));
        prop_assert!(alg_equals(&alg_arith(&add(&a, &b), &b, ArithOp::Sub).unwrap(), &a));
        prop_assert!(alg_equals(&mul(&a, &alg_inv(&a).unwrap()), &AlgebraicNumber::one()));
        prop_assert!(alg_equals(&add(&add(&a, &b), &c), &add(&a, &add(&b, &c))));
        prop_assert!(alg_equals(&mul(&mul(&a, &b), &c), &mul(&a, &mul(&b, &c))));
    }

    #[test]
    fn field_laws_degree_four(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_algebraic(&mut r, 4, 10);
        let b = random_algebraic(&mut r, 2, 10);
        prop_assert!(alg_equals(&add(&a, &b), &add(&b, &a)));
        prop_assert!(alg_equals(&alg_arith(&add(&a, &b), &b, ArithOp::Sub).unwrap(), &a));
        prop_assert!(alg_equals(&mul(&a, &alg_inv(&a).unwrap()), &AlgebraicNumber::one()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn isolation_of_known_roots(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mut known: Vec<(f64, f64)> = Vec::new();
        let mut p: IntPolynomial = Poly::one();
        let mut used: Vec<IntPolynomial> = Vec::new();
        for _ in 0..r.gen_range(1..=3) {
            let f = if r.gen_bool(0.5) {
                let (a, b) = (r.gen_range(1..=5i64), r.gen_range(-9..=9i64));
                primitive_part(&int_poly(&[-b, a]))
            } else {
                let (b, c) = (r.gen_range(-6..=6i64), r.gen_range(-9..=9i64));
                let disc = b * b - 4 * c;
                let s = (disc.abs() as f64).sqrt().round() as i64;
                if disc >= 0 && s * s == disc {
                    continue;
                }
                int_poly(&[c, b, 1])
            };
            if used.contains(&f) {
                continue;
            }
            let c: Vec<f64> = f.coeffs().iter().map(|x| x.to_f64().unwrap()).collect();
            if c.len() == 2 {
                known.push((-c[0] / c[1], 0.0));
            } else {
                let disc = c[1] * c[1] - 4.0 * c[0];
                if disc > 0.0 {
                    known.push(((-c[1] + disc.sqrt()) / 2.0, 0.0));
                    known.push(((-c[1] - disc.sqrt()) / 2.0, 0.0));
                } else {
                    known.push((-c[1] / 2.0, (-disc).sqrt() / 2.0));
                    known.push((-c[1] / 2.0, -(-disc).sqrt() / 2.0));
                }
            }
            p = &p * &f;
            used.push(f);
        }
        prop_assume!(!known.is_empty());
        let boxes = isolate(&p).unwrap();
        prop_assert_eq!(boxes.len(), known.len());
        for (re, im) in &known {
            let hits = boxes
                .iter()
                .filter(|b| {
                    let (mr, mi) = ComplexBox::from_cinterval(b).midpoint();
                    (mr.to_f64().unwrap() - re).abs() < 1e-9 && (mi.to_f64().unwrap() - im).abs() < 1e-9
                })
                .count();
            prop_assert_eq!(hits, 1);
        }
    }

    #[test]
    fn conjugate_sets(seed in any::<u64>()) {
        let a = random_algebraic(&mut rng(seed), 4, 10);
        let c = conjugates_of(&a);
        prop_assert_eq!(c.len(), a.degree());
        prop_assert_eq!(c.iter().filter(|x| alg_equals(x, &a)).count(), 1);
    }

    #[test]
    fn root_of_unity_against_division(seed in any::<u64>()) {
        let a = unit_circle_sample(seed);
        prop_assert_eq!(root_of_unity_order(&a).unwrap(), brute_force_order(a.minpoly(), 60));
    }

    #[test]
    fn modulus_one_iff_norm_one(seed in any::<u64>()) {
        let a = unit_circle_sample(seed);
        let n = mul(&a, &complex_conjugate_of(&a));
        prop_assert_eq!(compare_modulus_to_one(&a).unwrap() == Ordering::Equal, alg_equals(&n, &AlgebraicNumber::one()));
    }

    #[test]
    fn factors_re_expand(seed in any::<u64>()) {
        let mut r = rng(seed);
        let d = r.gen_range(1..=4);
        let mut p = random_poly(&mut r, d, 10);
        if r.gen_bool(0.5) {
            let e = r.gen_range(1..=3);
            let q = random_poly(&mut r, e, 5);
            p = &p * &q;
        }
        let factors = factor_over_rationals(&p).unwrap();
        let mut prod: IntPolynomial = Poly::one();
        for (f, e) in &factors {
            prod = &prod * &f.pow(*e);
            if f.deg() <= 3 {
                prop_assert!(f.deg() == 1 || !has_rational_root(f), "{:?} is reducible", f);
            }
        }
        let (a, b) = (primitive_part(&prod), primitive_part(&p));
        prop_assert!(a == b || a == b.scale(&BigInt::from(-1)));
    }
}
