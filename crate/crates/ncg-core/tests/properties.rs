//! Property tests for the algebraic laws every other result depends on:
//! ring axioms, star identities, Leibniz rules, the invertibility
//! criterion, and serialization round-trips.

use num::BigRational;
use proptest::prelude::*;

use ncg_core::derivation::Derivation;
use ncg_core::form::{FormKind, FormSpec};
use ncg_core::kronecker::KElement;
use ncg_core::torus::TorusElement;
use ncg_core::{GaussianRational, LaurentScalar};

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=9).prop_map(|(num, den)| BigRational::new(num.into(), den.into()))
}

fn arb_gaussian() -> impl Strategy<Value = GaussianRational> {
    (arb_rational(), arb_rational()).prop_map(|(re, im)| GaussianRational::new(re, im))
}

fn arb_kelement(n: usize) -> impl Strategy<Value = KElement> {
    (
        arb_gaussian(),
        arb_gaussian(),
        proptest::collection::vec(arb_gaussian(), n),
    )
        .prop_map(move |(lambda, mu, alpha)| KElement::from_parts(n, lambda, mu, alpha))
}

fn arb_laurent() -> impl Strategy<Value = LaurentScalar> {
    proptest::collection::vec((-3i64..=3, arb_gaussian()), 0..4).prop_map(|terms| {
        let mut total = LaurentScalar::zero();
        for (m, c) in terms {
            total = &total + &LaurentScalar::monomial(c, m);
        }
        total
    })
}

fn arb_torus_element() -> impl Strategy<Value = TorusElement> {
    proptest::collection::vec(((-2i64..=2, -2i64..=2), arb_laurent()), 0..4).prop_map(|terms| {
        let mut total = TorusElement::zero();
        for ((k, l), c) in terms {
            total = &total + &TorusElement::monomial(k, l, c);
        }
        total
    })
}

fn arb_derivation(n: usize) -> impl Strategy<Value = Derivation> {
    proptest::collection::vec(arb_gaussian(), n + n * n)
        .prop_map(move |coords| Derivation::from_coords(n, &coords))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_rationals_form_a_star_field(
        a in arb_gaussian(),
        b in arb_gaussian(),
        c in arb_gaussian(),
    ) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!(a.conj().conj(), a);
    }

    #[test]
    fn gaussian_rational_strings_round_trip(a in arb_gaussian()) {
        let text = a.to_string();
        let back: GaussianRational = text.parse().expect("canonical strings parse");
        prop_assert_eq!(back, a);
    }

    #[test]
    fn laurent_scalars_form_a_star_ring(
        a in arb_laurent(),
        b in arb_laurent(),
        c in arb_laurent(),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!((&a * &b).star(), &a.star() * &b.star());
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn laurent_monomials_multiply_by_adding_degrees(m in -5i64..=5, k in -5i64..=5) {
        prop_assert_eq!(&LaurentScalar::q_pow(m) * &LaurentScalar::q_pow(k), LaurentScalar::q_pow(m + k));
    }

    #[test]
    fn laurent_strings_round_trip(a in arb_laurent()) {
        let text = a.to_string();
        let back: LaurentScalar = text.parse().expect("canonical strings parse");
        prop_assert_eq!(back, a);
    }

    #[test]
    fn path_algebra_is_an_associative_star_algebra(
        a in arb_kelement(2),
        b in arb_kelement(2),
        c in arb_kelement(2),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &KElement::one(2), a.clone());
        prop_assert_eq!(&KElement::one(2) * &a, a.clone());
        prop_assert_eq!((&a * &b).star(), &b.star() * &a.star());
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn invertibility_matches_the_unit_criterion(a in arb_kelement(3)) {
        let lambda_ok = !a.lambda().is_zero();
        let sum_ok = !(a.lambda() + a.mu()).is_zero();
        match a.inverse() {
            Ok(inv) => {
                prop_assert!(lambda_ok && sum_ok);
                prop_assert_eq!(&a * &inv, KElement::one(3));
                prop_assert_eq!(&inv * &a, KElement::one(3));
            }
            Err(_) => prop_assert!(!lambda_ok || !sum_ok),
        }
    }

    #[test]
    fn derivations_satisfy_the_leibniz_rule(
        d in arb_derivation(2),
        x in arb_kelement(2),
        y in arb_kelement(2),
    ) {
        prop_assert!(d.satisfies_leibniz(&x, &y));
    }

    #[test]
    fn derivation_brackets_stay_derivations(
        d1 in arb_derivation(2),
        d2 in arb_derivation(2),
        x in arb_kelement(2),
        y in arb_kelement(2),
    ) {
        let bracket = d1.bracket(&d2);
        prop_assert!(bracket.satisfies_leibniz(&x, &y));
        prop_assert_eq!(
            bracket.apply(&x),
            &d1.apply(&d2.apply(&x)) + &d2.apply(&d1.apply(&x)).scale(&-GaussianRational::one())
        );
    }

    #[test]
    fn k_elements_round_trip_through_json(a in arb_kelement(3)) {
        let text = serde_json::to_string(&a).expect("serializes");
        let back: KElement = serde_json::from_str(&text).expect("deserializes");
        prop_assert_eq!(back, a);
    }

    #[test]
    fn form_specs_round_trip_through_json(
        entries in proptest::collection::vec(proptest::collection::vec(arb_kelement(2), 2), 2),
    ) {
        let spec = FormSpec {
            schema: 1,
            kind: FormKind::LeftHermitian,
            entries,
        };
        let text = serde_json::to_string(&spec).expect("serializes");
        let back: FormSpec = serde_json::from_str(&text).expect("deserializes");
        prop_assert_eq!(back.schema, spec.schema);
        prop_assert_eq!(back.kind, spec.kind);
        prop_assert_eq!(back.entries, spec.entries);
    }

    #[test]
    fn torus_algebra_is_associative_with_star_antihomomorphism(
        a in arb_torus_element(),
        b in arb_torus_element(),
        c in arb_torus_element(),
    ) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!((&a * &b).star(), &b.star() * &a.star());
        prop_assert_eq!(a.star().star(), a);
    }

    #[test]
    fn torus_monomials_obey_the_exchange_rule(
        k in -3i64..=3,
        l in -3i64..=3,
        m in -3i64..=3,
        n in -3i64..=3,
    ) {
        let left = &TorusElement::monomial(k, l, LaurentScalar::one())
            * &TorusElement::monomial(m, n, LaurentScalar::one());
        let right = TorusElement::monomial(k + m, l + n, LaurentScalar::q_pow(l * m));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn torus_differential_satisfies_leibniz(
        a in arb_torus_element(),
        b in arb_torus_element(),
    ) {
        let product_rule = &(&a * &b).d() - &(&a.d().right_mul(&b) + &b.d().left_mul(&a));
        prop_assert_eq!(product_rule, Default::default());
    }
}
