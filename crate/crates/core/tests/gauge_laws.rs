use dgsym_core::params::{
    classify, classify_via_invariants, compute_invariants, gauge_act_params, gauge_compose, gauge_inverse, rat,
    Subfamily,
};
use dgsym_core::{DgParams, GaugeElement, Rational};
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=7).prop_map(|(a, b)| rat(a, b))
}

fn nonzero() -> impl Strategy<Value = Rational> {
    (prop_oneof![-9i64..=-1, 1i64..=9], 1i64..=5).prop_map(|(a, b)| rat(a, b))
}

fn gauge() -> impl Strategy<Value = GaugeElement> {
    (nonzero(), q()).prop_map(|(l, g)| GaugeElement::new(l, g).unwrap())
}

fn generic() -> impl Strategy<Value = DgParams> {
    (1usize..=3, nonzero(), q(), proptest::collection::vec(q(), 6))
        .prop_map(|(n, nu1, nu2, mu)| DgParams::new(n, [nu1, nu2], mu.try_into().unwrap()).unwrap())
}

fn special() -> impl Strategy<Value = DgParams> {
    (0usize..Subfamily::ALL.len(), nonzero(), q(), proptest::collection::vec(nonzero(), 4)).prop_filter_map(
        "degenerate subfamily coordinates",
        |(k, nu1, nu2, rest)| {
            let sub = Subfamily::ALL[k];
            let mut free = vec![nu1, nu2];
            free.extend(rest.into_iter().take(sub.free_dimension() - 2));
            sub.point(1, &free).ok()
        },
    )
}

fn params() -> impl Strategy<Value = DgParams> {
    prop_oneof![generic(), special()]
}

proptest! {
    #[test]
    fn composition_is_associative(a in gauge(), b in gauge(), c in gauge()) {
        prop_assert_eq!(gauge_compose(&gauge_compose(&a, &b), &c), gauge_compose(&a, &gauge_compose(&b, &c)));
    }

    #[test]
    fn identity_and_inverse(a in gauge()) {
        let e = GaugeElement::identity();
        prop_assert_eq!(gauge_compose(&a, &e), a.clone());
        prop_assert_eq!(gauge_compose(&e, &a), a.clone());
        prop_assert_eq!(gauge_compose(&a, &gauge_inverse(&a)), e.clone());
        prop_assert_eq!(gauge_compose(&gauge_inverse(&a), &a), e);
    }

    #[test]
    fn action_is_a_group_action(a in gauge(), b in gauge(), p in params()) {
        let two_steps = gauge_act_params(&a, &gauge_act_params(&b, &p));
        prop_assert_eq!(two_steps, gauge_act_params(&gauge_compose(&a, &b), &p));
        prop_assert_eq!(gauge_act_params(&gauge_inverse(&a), &gauge_act_params(&a, &p)), p);
    }

    #[test]
    fn invariants_and_class_are_gauge_invariant(a in gauge(), p in params()) {
        let moved = gauge_act_params(&a, &p);
        prop_assert_eq!(compute_invariants(&moved), compute_invariants(&p));
        prop_assert_eq!(classify(&moved), classify(&p));
        prop_assert_eq!(classify_via_invariants(&p), classify(&p));
    }
}
