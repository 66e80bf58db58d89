use std::sync::Arc;

use cwlab::affine::{random_direction_space, AffineSubspace, PointSet};
use cwlab::constructions::{random_homogeneous_system, random_system};
use cwlab::counter::{count_zeros_naive, Counter, Region, ORACLE_BUDGET};
use cwlab::ff::{embed_subfield, FieldElement, FieldSpec};
use cwlab::format::{parse_sub, parse_sys, write_sub, write_sys};
use cwlab::geometry::{estimate_from_counts, linear_factor_test, FactorVerdict};
use cwlab::poly::{default_names, parse_poly, MultiPoly, PolySystem};
use cwlab::rng::SplitMix64;
use cwlab::theorems::{check_congruence, lemma1_witness, verify_homogenization_identity, CheckOptions, Law, Status};
use proptest::prelude::*;

const ORDERS: [u64; 8] = [2, 3, 4, 5, 7, 8, 9, 16];

fn field(i: usize) -> Arc<FieldSpec> {
    FieldSpec::from_order(ORDERS[i % ORDERS.len()]).unwrap()
}

fn el(f: &FieldSpec, raw: u32) -> FieldElement {
    FieldElement::from_index(raw % f.q())
}

/// A small random system with `n > d` unless `any_degree`.
fn system(q: u64, n: usize, degs: &[u32], seed: u64) -> PolySystem {
    random_system(&FieldSpec::from_order(q).unwrap(), n, degs, seed).unwrap().system
}

fn small_system() -> impl Strategy<Value = PolySystem> {
    (0usize..4, 1usize..5, prop::collection::vec(1u32..4, 1..3), any::<u64>())
        .prop_map(|(qi, n, degs, seed)| system([2, 3, 4, 5][qi], n, &degs, seed))
}

fn below_dimension_system() -> impl Strategy<Value = PolySystem> {
    small_system().prop_filter("n > d", |s| (s.total_degree() as usize) < s.nvars())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(fi in 0usize..8, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(fi);
        let (a, b, c) = (el(&f, a), el(&f, b), el(&f, c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
        }
        prop_assert_eq!(f.pow(a, f.q() as u64), a);
    }

    #[test]
    fn frobenius_is_a_field_automorphism(fi in 0usize..8, a in any::<u32>(), b in any::<u32>()) {
        let f = field(fi);
        let (a, b) = (el(&f, a), el(&f, b));
        for i in 0..f.k() {
            let fr = |x| f.frobenius(x, i).unwrap();
            prop_assert_eq!(fr(f.add(a, b)), f.add(fr(a), fr(b)));
            prop_assert_eq!(fr(f.mul(a, b)), f.mul(fr(a), fr(b)));
        }
    }

    #[test]
    fn relative_norm_lands_in_the_subfield(p in prop::sample::select(vec![2u64, 3]), a in any::<u32>()) {
        let big = FieldSpec::new(p, 4).unwrap();
        let small = FieldSpec::new(p, 2).unwrap();
        let emb = embed_subfield(&small, &big).unwrap();
        let a = el(&big, a);
        let n = big.relative_norm(a, 2).unwrap();
        prop_assert!(emb.pull_back(n).is_some());
        prop_assert_eq!(n.is_zero(), a.is_zero());
    }

    #[test]
    fn polynomials_print_and_parse_back(s in small_system()) {
        let names = default_names(s.nvars());
        for p in s.polys() {
            let text = p.format_with(&names);
            prop_assert_eq!(&parse_poly(&text, s.field(), &names).unwrap(), p);
        }
        let file = write_sys(&s, &names);
        let back = parse_sys(&file).unwrap();
        prop_assert_eq!(&back.system, &s);
        prop_assert_eq!(write_sys(&back.system, &back.vars), file);
    }

    #[test]
    fn subspaces_round_trip_canonically(fi in 0usize..4, n in 1usize..5, k in 0usize..5, seed in any::<u64>()) {
        let f = field(fi);
        let k = k.min(n);
        let mut rng = SplitMix64::new(seed);
        let through: Vec<_> = (0..n).map(|_| rng.element(&f)).collect();
        let l = random_direction_space(&f, n, k, &mut rng).translate_through(&through);
        prop_assert_eq!(l.canonicalize(), l.clone());
        let text = write_sub(&l);
        prop_assert_eq!(parse_sub(&text, &f).unwrap(), l.clone());
        let sizes: u128 = l.parallel_class().iter().map(|t| t.size()).sum();
        prop_assert_eq!(sizes, (f.q() as u128).pow(n as u32));
        prop_assert!(l.contains(&through));
    }

    #[test]
    fn engine_agrees_with_oracle_for_any_worker_count(s in small_system(), workers in 1usize..6) {
        let oracle = count_zeros_naive(&s, &Region::Full, ORACLE_BUDGET).unwrap();
        prop_assert_eq!(Counter::new(workers, ORACLE_BUDGET).count_full(&s).unwrap(), oracle);
        prop_assert_eq!(Counter::single().zero_set(&s).unwrap(), Counter::new(workers, ORACLE_BUDGET).zero_set(&s).unwrap());
    }

    #[test]
    fn chevalley_and_ax(s in below_dimension_system()) {
        let opts = CheckOptions::default();
        prop_assert_eq!(check_congruence(&s, Law::ChevalleyP, &opts).unwrap().status(), Status::Pass);
        prop_assert_eq!(check_congruence(&s, Law::AxQ, &opts).unwrap().status(), Status::Pass);
    }

    #[test]
    fn parallel_subspaces_agree(s in below_dimension_system(), seed in any::<u64>()) {
        let opts = CheckOptions {
            scope: cwlab::theorems::Scope::Sampled { count: 8, seed },
            ..Default::default()
        };
        prop_assert!(check_congruence(&s, Law::Theorem1, &opts).unwrap().pass);
        prop_assert!(check_congruence(&s, Law::WarningHyperplanes, &opts).unwrap().pass);
    }

    #[test]
    fn homogenization_identity(s in small_system()) {
        prop_assume!(s.polys().iter().all(|p| !p.is_zero()));
        prop_assert!(verify_homogenization_identity(&s, &Counter::default()).unwrap().pass);
    }

    #[test]
    fn lemma1_holds_for_arbitrary_sets(fi in 0usize..3, n in 1usize..4, density in 1u64..4, seed in any::<u64>()) {
        let f = field(fi);
        let mut rng = SplitMix64::new(seed);
        let pts: Vec<_> = AffineSubspace::full(&f, n).points().filter(|_| rng.below(4) < density).collect();
        let z = PointSet::new(&f, n, pts).unwrap();
        let k = rng.below(n as u64) as usize;
        let l0 = random_direction_space(&f, n, k, &mut rng);
        prop_assert!(lemma1_witness(&z, &l0).unwrap().pass);
    }

    #[test]
    fn estimates_stay_in_range(q in 2u32..6, n in 1usize..5, counts in prop::collection::vec(0u64..5000, 2..5)) {
        let counts: Vec<(u32, u64)> = counts.into_iter().enumerate().map(|(i, c)| (i as u32 + 1, c)).collect();
        let e = estimate_from_counts(q, n, &counts);
        prop_assert_eq!(&e, &estimate_from_counts(q, n, &counts));
        match e.d_hat {
            Some(d) => {
                prop_assert!(d as usize <= n);
                prop_assert!(e.k_hat.unwrap() >= 1);
            }
            None => prop_assert!(counts.iter().all(|c| c.1 == 0)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planted_linear_factors_are_found(qi in 0usize..3, n in 2usize..4, seed in any::<u64>()) {
        let f = field(qi);
        let mut rng = SplitMix64::new(seed);
        let form = random_homogeneous_system(&f, n, &[2], seed).unwrap().system.polys()[0].clone();
        let lin = loop {
            let l = (0..n).fold(MultiPoly::zero(&f, n), |acc, i| &acc + &MultiPoly::var(&f, n, i).scale(rng.element(&f)));
            if !l.is_zero() {
                break l;
            }
        };
        let product = &lin * &form;
        let r = linear_factor_test(&product, 1, 3, seed, &Counter::default()).unwrap();
        let found = matches!(r.verdict, FactorVerdict::HasFactor { .. });
        prop_assert!(found);
    }

    #[test]
    fn homogeneous_systems_stay_homogeneous(qi in 0usize..4, n in 1usize..5, seed in any::<u64>()) {
        let s = random_homogeneous_system(&field(qi), n, &[2, 1], seed).unwrap().system;
        prop_assert!(s.is_homogeneous());
        prop_assert!(s.homogenized().is_ok());
    }
}
