mod common;

use multiholo::gamma::{f_by_recurrence, f_value, gamma_of, theta};
use multiholo::group::{Element, ElementOrder, Generator, GroupShape};
use multiholo::ring::{enumerate_rings, h_rings, RingStructure};
use num_bigint::BigInt;
use proptest::prelude::*;

fn shape_strategy() -> impl Strategy<Value = GroupShape> {
    (
        0usize..=3,
        proptest::collection::vec(1u32..=5, 0..=3),
        proptest::sample::select(vec![vec![], vec![3], vec![9, 3], vec![5]]),
    )
        .prop_map(|(n, mut e, odd)| {
            e.sort_unstable_by(|a, b| b.cmp(a));
            GroupShape::new(n, e, odd).unwrap()
        })
}

fn element_strategy(s: GroupShape) -> impl Strategy<Value = Element> {
    let free = proptest::collection::vec(-1000i64..=1000, s.rank());
    let two = proptest::collection::vec(any::<i64>(), s.two_rank());
    let odd = proptest::collection::vec(any::<i64>(), s.odd_part().len());
    (free, two, odd).prop_map(move |(f, t, o)| {
        let t: Vec<i128> = t.into_iter().map(i128::from).collect();
        let o: Vec<i128> = o.into_iter().map(i128::from).collect();
        s.element(f.into_iter().map(BigInt::from).collect(), &t, &o)
            .unwrap()
    })
}

fn with_elements(k: usize) -> impl Strategy<Value = (GroupShape, Vec<Element>)> {
    shape_strategy().prop_flat_map(move |s| {
        let elems = proptest::collection::vec(element_strategy(s.clone()), k);
        (Just(s), elems)
    })
}

/// An H(G) ring on a shape, chosen by index modulo the number of rings.
fn ring_with_elements(k: usize) -> impl Strategy<Value = (RingStructure, Vec<Element>)> {
    (with_elements(k), any::<usize>()).prop_map(|((s, elems), i)| {
        let rings = h_rings(&s);
        (rings[i % rings.len()].clone(), elems)
    })
}

proptest! {
    #[test]
    fn group_laws((s, e) in with_elements(3)) {
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        prop_assert_eq!(s.add(a, b).unwrap(), s.add(b, a).unwrap());
        prop_assert_eq!(
            s.add(&s.add(a, b).unwrap(), c).unwrap(),
            s.add(a, &s.add(b, c).unwrap()).unwrap()
        );
        prop_assert!(s.add(a, &s.neg(a).unwrap()).unwrap().is_zero());
        prop_assert_eq!(s.sub(a, b).unwrap(), s.add(a, &s.neg(b).unwrap()).unwrap());
        prop_assert_eq!(s.scale(a, &BigInt::from(3)).unwrap(), s.add(a, &s.add(a, a).unwrap()).unwrap());
    }

    #[test]
    fn descriptor_round_trip(s in shape_strategy()) {
        let back: GroupShape = s.to_string().parse().unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_string(), s.to_string());
    }

    #[test]
    fn involutions_have_order_two(s in shape_strategy()) {
        for i in 0..s.two_rank() {
            prop_assert_eq!(s.element_order(&s.involution(i)).unwrap(), ElementOrder::Finite(2));
        }
    }

    #[test]
    fn standard_automorphisms_are_additive((s, e) in with_elements(2)) {
        for beta in s.standard_automorphisms() {
            prop_assert_eq!(
                s.apply(&beta, &s.add(&e[0], &e[1]).unwrap()).unwrap(),
                s.add(&s.apply(&beta, &e[0]).unwrap(), &s.apply(&beta, &e[1]).unwrap()).unwrap()
            );
        }
    }

    #[test]
    fn ring_axioms((r, e) in ring_with_elements(3)) {
        let s = r.shape();
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        let ab = r.multiply(a, b).unwrap();
        prop_assert_eq!(ab, r.multiply(b, a).unwrap());
        prop_assert_eq!(r.multiply(&s.add(a, b).unwrap(), c).unwrap(), ab + r.multiply(b, c).unwrap() + ab + r.multiply(a, c).unwrap());
        prop_assert!(s.scale(&s.embed(ab), &BigInt::from(2)).unwrap().is_zero());
        prop_assert!(r.multiply(&s.embed(ab), c).unwrap().is_zero());
        for beta in s.standard_automorphisms() {
            let lhs = s.apply(&beta, &s.embed(ab)).unwrap();
            let rhs = s.embed(r.multiply(&s.apply(&beta, a).unwrap(), &s.apply(&beta, b).unwrap()).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn circle_is_associative((r, e) in ring_with_elements(3)) {
        let (a, b, c) = (&e[0], &e[1], &e[2]);
        prop_assert_eq!(
            r.circle(&r.circle(a, b).unwrap(), c).unwrap(),
            r.circle(a, &r.circle(b, c).unwrap()).unwrap()
        );
        prop_assert_eq!(r.circle(a, &r.shape().zero()).unwrap(), a.clone());
    }

    #[test]
    fn gamma_is_a_homomorphism_into_aut((r, e) in ring_with_elements(3)) {
        let s = r.shape();
        let (g, h, x) = (&e[0], &e[1], &e[2]);
        let gg = gamma_of(&r, g).unwrap();
        let gh = gamma_of(&r, h).unwrap();
        let gc = gamma_of(&r, &r.circle(g, h).unwrap()).unwrap();
        prop_assert_eq!(s.apply(&gc, x).unwrap(), s.apply(&gh, &s.apply(&gg, x).unwrap()).unwrap());
        // gamma(g) is h -> h + hg
        let expected = s.add(x, &s.embed(r.multiply(x, g).unwrap())).unwrap();
        prop_assert_eq!(s.apply(&gg, x).unwrap(), expected);
    }

    #[test]
    fn theta_properties((r, e) in ring_with_elements(2)) {
        let s = r.shape();
        let (a, b) = (&e[0], &e[1]);
        let ta = theta(&r, a).unwrap();
        prop_assert_eq!(&theta(&r, &ta).unwrap(), a);
        prop_assert_eq!(theta(&r, &s.add(a, b).unwrap()).unwrap(), r.circle(&ta, &theta(&r, b).unwrap()).unwrap());
        prop_assert_eq!(f_value(&r, a).unwrap(), f_by_recurrence(&r, a).unwrap());
        prop_assert!(f_value(&r, &s.scale(a, &BigInt::from(4)).unwrap()).unwrap().is_zero());
        // f only sees coordinates mod 4
        let shifted = s.add(a, &s.scale(b, &BigInt::from(4)).unwrap()).unwrap();
        prop_assert_eq!(f_value(&r, &shifted).unwrap(), f_value(&r, a).unwrap());
        for g in s.generators() {
            let x = s.generator(g);
            prop_assert_eq!(theta(&r, &x).unwrap(), x);
        }
    }

    #[test]
    fn k_rings_are_rings((s, e) in with_elements(3).prop_filter("small", |(s, _)| s.table_dim() * s.table_dim() * s.two_rank() <= 27)) {
        for r in enumerate_rings(&s, true).unwrap() {
            let (a, b, c) = (&e[0], &e[1], &e[2]);
            prop_assert_eq!(r.multiply(a, b).unwrap(), r.multiply(b, a).unwrap());
            prop_assert!(r.multiply(&s.embed(r.multiply(a, b).unwrap()), c).unwrap().is_zero());
            prop_assert_eq!(
                r.circle(&r.circle(a, b).unwrap(), c).unwrap(),
                r.circle(a, &r.circle(b, c).unwrap()).unwrap()
            );
        }
    }
}

#[test]
fn generators_are_listed_in_order() {
    let s: GroupShape = "Z^2 x Z8 x Z2 x Z3".parse().unwrap();
    let gens: Vec<_> = s.generators().collect();
    assert_eq!(
        gens,
        vec![
            Generator::Free(0),
            Generator::Free(1),
            Generator::Two(0),
            Generator::Two(1),
            Generator::Odd(0)
        ]
    );
}
