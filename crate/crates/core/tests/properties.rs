//! Property tests for the structural invariants: associativity and grading of
//! `A`, the ℤ-action, `d² = 0`, the comparison map, graded commutativity,
//! the Jacobi and Poisson identities, and multiplicativity of the action on
//! the Yoneda algebra.

use proptest::prelude::*;
use superjordan::algebra::{normal_form, q, Element, GroupPower, Letter, Monomial};
use superjordan::cohomology::ClassName;
use superjordan::resolution::{apply_f, bar_differential, differential, generators, BiElem};
use superjordan::structure::{graded_commutator, jacobiator_h1, poisson_defect};
use superjordan::yoneda::{act, cup_k, YonedaClass};

fn monomial() -> impl Strategy<Value = Monomial> {
    (0u8..2, 0u32..3, 0u32..4).prop_map(|(a, b, c)| Monomial::new(a, b, c))
}

fn element() -> impl Strategy<Value = Element> {
    prop::collection::vec((-4i64..=4, monomial()), 0..4)
        .prop_map(|ts| Element::from_terms(ts.into_iter().map(|(c, m)| (q(c), m))))
}

fn word() -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(prop_oneof![Just(Letter::X), Just(Letter::Y)], 0..9)
}

fn product_of_letters(w: &[Letter]) -> Element {
    w.iter().fold(Element::one(), |acc, l| {
        let g = match l {
            Letter::X => Element::x(),
            Letter::Y => Element::y(),
        };
        acc.mul(&g)
    })
}

fn resolution_element(k: u32) -> impl Strategy<Value = BiElem> {
    let gens = generators(k);
    prop::collection::vec((-3i64..=3, monomial(), 0..gens.len(), monomial()), 1..4).prop_map(move |ts| {
        let mut e = BiElem::zero(k);
        for (c, l, g, r) in ts {
            e.add_term(q(c), l, gens[g], r);
        }
        e
    })
}

fn degree_one() -> impl Strategy<Value = ClassName> {
    prop_oneof![Just(ClassName::C), (0u32..4).prop_map(ClassName::S)]
}

fn low_class() -> impl Strategy<Value = ClassName> {
    prop_oneof![
        Just(ClassName::C),
        (0u32..3).prop_map(ClassName::S),
        (0u32..3).prop_map(|n| ClassName::T(n, 2)),
        (0u32..3).prop_map(|n| ClassName::U(n, 2)),
        (0u32..2).prop_map(|n| ClassName::V(n, 3)),
        (0u32..2).prop_map(|n| ClassName::W(n, 3)),
    ]
}

fn yoneda_class(n: u32) -> impl Strategy<Value = YonedaClass> {
    (-3i64..=3, -3i64..=3).prop_map(move |(a, b)| {
        if n == 0 {
            return YonedaClass::e().scale(&q(a));
        }
        let mut v = YonedaClass::eta(n).scale(&q(a));
        v.add_scaled(&q(b), &YonedaClass::omega(n));
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multiplication_is_associative(u in element(), v in element(), w in element()) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
    }

    #[test]
    fn multiplication_respects_degree(a in monomial(), b in monomial()) {
        let p = Element::monomial(a).mul(&Element::monomial(b));
        prop_assert!(p.is_zero() || p.degree() == Some(a.degree() + b.degree()));
    }

    #[test]
    fn rewriting_agrees_with_multiplication(w in word()) {
        prop_assert_eq!(normal_form(&w), product_of_letters(&w));
    }

    #[test]
    fn group_action_is_an_automorphism(u in element(), v in element(), k in -2i64..=2) {
        let t = GroupPower(k);
        prop_assert_eq!(t.apply(&u.mul(&v)), t.apply(&u).mul(&t.apply(&v)));
        prop_assert_eq!(GroupPower(-k).apply(&t.apply(&u)), u);
    }

    #[test]
    fn differential_squares_to_zero(e in (2u32..8).prop_flat_map(resolution_element)) {
        let dd = differential(&differential(&e).unwrap()).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn comparison_map_commutes_with_differentials(e in (1u32..6).prop_flat_map(resolution_element)) {
        let lhs = bar_differential(&apply_f(&e)).unwrap();
        let rhs = apply_f(&differential(&e).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cup_product_is_graded_commutative(a in low_class(), b in low_class()) {
        prop_assert!(graded_commutator(a, b).unwrap().is_zero());
    }

    #[test]
    fn jacobi_identity_on_degree_one(x in degree_one(), y in degree_one(), z in degree_one()) {
        prop_assert!(jacobiator_h1(x, y, z).unwrap().is_zero());
    }

    #[test]
    fn bracket_is_a_graded_derivation(d in degree_one(), a in low_class(), b in low_class()) {
        prop_assume!(a.hdeg() + b.hdeg() <= 5);
        prop_assert!(poisson_defect(d, a, b).unwrap().is_zero());
    }

    #[test]
    fn yoneda_action_is_multiplicative(
        (a, b) in (0u32..4, 0u32..4).prop_flat_map(|(m, n)| (yoneda_class(m), yoneda_class(n)))
    ) {
        prop_assert_eq!(act(&cup_k(&a, &b)), cup_k(&act(&a), &act(&b)));
    }
}
