mod common;

use common::*;
use power_sum_lab::algebraic::{alg_arith, alg_equals, AlgebraicNumber, ArithOp};
use power_sum_lab::intpoly::cyclotomic;
use power_sum_lab::scalar::cmp_rational;
use power_sum_lab::structure::{
    build_partition, check_nondegenerate, equiv_classes, property_check, reduce, related, PowerSumSpec, Term,
};
use power_sum_lab::trajectory::eval_distance;
use proptest::prelude::*;
use rand::Rng;

/// Small specs that often contain torsion-related pairs and conjugates.
fn random_spec(seed: u64) -> PowerSumSpec {
    let mut r = rng(seed);
    let mut alphas: Vec<AlgebraicNumber> = Vec::new();
    let base = random_algebraic(&mut r, 2, 5);
    alphas.push(base.clone());
    for _ in 0..r.gen_range(0..3) {
        let next = match r.gen_range(0..3) {
            0 => {
                let t = [2u64, 3, 4, 6][r.gen_range(0..4)];
                let roots = AlgebraicNumber::roots_of(&cyclotomic(t)).unwrap();
                alg_arith(&base, &roots[r.gen_range(0..roots.len())], ArithOp::Mul).unwrap()
            }
            1 => {
                let c = power_sum_lab::algebraic::conjugates_of(&base);
                c[r.gen_range(0..c.len())].clone()
            }
            _ => random_algebraic(&mut r, 2, 5),
        };
        if !alphas.iter().any(|a| alg_equals(a, &next)) {
            alphas.push(next);
        }
    }
    let terms = alphas
        .into_iter()
        .map(|alpha| {
            let mut c = 0;
            while c == 0 {
                c = r.gen_range(-3..=3);
            }
            Term { q: AlgebraicNumber::from_rational(q(c, r.gen_range(1..=3))), alpha }
        })
        .collect();
    PowerSumSpec::new(terms).unwrap()
}

fn reduced_at(spec: &PowerSumSpec, residue: u64) -> Option<PowerSumSpec> {
    let cert = reduce(spec, residue).unwrap();
    (!cert.reduced_terms.terms.is_empty()).then_some(cert.reduced_terms)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn reduction_preserves_values(seed in any::<u64>()) {
        let spec = random_spec(seed);
        let m = reduce(&spec, 0).unwrap().exponent_m;
        for residue in 0..m {
            let red = reduced_at(&spec, residue);
            for n in (1..=20u64).filter(|n| n % m == residue && *n >= m) {
                let t = (n - residue) / m;
                let a = eval_distance(&spec, n, 64).unwrap();
                match &red {
                    None => prop_assert!(a.p == 0.into() && a.dist_lo == q(0, 1), "n = {}", n),
                    Some(red) => {
                        let b = eval_distance(red, t, 64).unwrap();
                        prop_assert!(cmp_rational(&a.dist_lo, &b.dist_hi).is_le() && cmp_rational(&b.dist_lo, &a.dist_hi).is_le(), "n = {}", n);
                        if a.decided && b.decided {
                            prop_assert_eq!(a.p, b.p);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reduced_terms_satisfy_properties(seed in any::<u64>()) {
        let spec = random_spec(seed);
        let m = reduce(&spec, 0).unwrap().exponent_m;
        for residue in 0..m {
            if let Some(red) = reduced_at(&spec, residue) {
                let alphas = red.alphas();
                prop_assert!(property_check(&alphas).unwrap().holds());
                prop_assert!(check_nondegenerate(&alphas).unwrap().is_none());
                let part = build_partition(&red).unwrap();
                let members: usize = part.classes.iter().map(|c| c.class_size).sum();
                prop_assert_eq!(members, red.terms.len());
                for c in &part.classes {
                    for (_, t) in &c.members {
                        prop_assert!(c.full_conjugates.iter().any(|b| alg_equals(b, &t.alpha)));
                    }
                }
            }
        }
    }

    #[test]
    fn classes_form_a_partition(seed in any::<u64>()) {
        let alphas = random_spec(seed).alphas();
        let classes = equiv_classes(&alphas).unwrap();
        let mut seen: Vec<usize> = classes.iter().flatten().copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..alphas.len()).collect::<Vec<_>>());
        let class_of = |i: usize| classes.iter().position(|c| c.contains(&i)).unwrap();
        for i in 0..alphas.len() {
            prop_assert!(related(&alphas[i], &alphas[i]).unwrap());
            for j in 0..alphas.len() {
                let rel = related(&alphas[i], &alphas[j]).unwrap();
                prop_assert_eq!(rel, related(&alphas[j], &alphas[i]).unwrap());
                // directly related entries share a class
                if rel {
                    prop_assert_eq!(class_of(i), class_of(j));
                }
            }
        }
    }
}
