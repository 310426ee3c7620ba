mod common;

use common::*;
use finisig_core::composite::{Lattice, Symbol};
use finisig_core::LohnerConfig;
use proptest::prelude::*;

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = (-20i64..=20, 1i64..=16).prop_map(|(p, q)| Expr::Leaf(p, q));
    leaf.prop_recursive(5, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Expr::Sqr(Box::new(a))),
            inner.prop_map(|a| Expr::Neg(Box::new(a))),
        ]
    })
}

fn symbols(n: usize) -> impl Strategy<Value = Vec<Symbol>> {
    prop::collection::vec(prop_oneof![Just(Symbol::Plus), Just(Symbol::Minus)], n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn interval_expressions_enclose_exact_values(e in expr()) {
        prop_assert!(check_expression(&e).is_ok(), "{:?}", check_expression(&e));
    }

    #[test]
    fn log_norms_bound_rayleigh_quotients(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n);
        let xs: Vec<Vec<f64>> = (0..50).map(|_| unit_vector(&mut r, n)).collect();
        prop_assert!(check_log_norm(&a, &xs).is_ok(), "{:?}", check_log_norm(&a, &xs));
    }

    #[test]
    fn covering_matches_linear_truth(seed in any::<u64>()) {
        let c = LinearCovering::random(&mut rng(seed));
        let (u, s) = c.margins();
        prop_assume!(u.abs() > 1e-6 && s.abs() > 1e-6);
        prop_assert_eq!(c.verify(10), c.covers());
    }

    #[test]
    fn composite_distance_is_a_metric(
        (s, t, u) in (1usize..20).prop_flat_map(|n| (symbols(n), symbols(n), symbols(n))),
        first in -10i64..=0,
    ) {
        let lattice = Lattice { xi0: 1.5, first_index: first };
        prop_assert!(check_metric(&s, &t, &u, lattice).is_ok(), "{:?}", check_metric(&s, &t, &u, lattice));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn linear_flows_stay_enclosed(seed in any::<u64>()) {
        let case = LinearCase::random(&mut rng(seed));
        let r = check_linear_case(&case, LohnerConfig { order: 12, step: 0.01 });
        prop_assert!(r.is_ok(), "{:?}", r);
    }
}

#[test]
fn oversized_step_is_reported() {
    check_rough_failure().unwrap();
}

#[test]
fn linear_cone_rates_have_closed_forms() {
    linear_cone_rates(200, 7).unwrap();
}

#[test]
fn compose_refuses_exactly_the_overlaps() {
    compose_cases(200, 11).unwrap();
}

#[test]
fn exp_bounds_are_tight() {
    let (lo, hi) = exp_bounds(&num::BigRational::from_integer(1.into()));
    let e = std::f64::consts::E;
    assert!(num::BigRational::from_float(e - 1e-15).unwrap() < lo);
    assert!(hi < num::BigRational::from_float(e + 1e-15).unwrap());
}
