use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use refbloch_core::bloch::{lambda1, lambda2, lambda_basis, r_relation, s_relation};
use refbloch_core::certifier::{check_certificate, Certificate, CertificateTerm, IdentityClaim};
use refbloch_core::field::{Field, Rational, SquareClass, TowerContext, TowerElement};
use refbloch_core::square_algebra::{expand_wedge, halve_wedge, GroupRingElement};

fn context() -> Arc<TowerContext> {
    let (_, c) = TowerElement::from_i64(2)
        .sqrt_positive(&TowerContext::root())
        .unwrap();
    let (_, c) = TowerElement::from_i64(3).sqrt_positive(&c).unwrap();
    c
}

fn tower(coeffs: Vec<(i64, i64)>) -> TowerElement {
    let coeffs = coeffs
        .into_iter()
        .map(|(n, d)| Rational::from_ratio(n, d).unwrap())
        .collect();
    TowerElement::from_coeffs(&context(), coeffs).unwrap()
}

fn tower_strategy() -> impl Strategy<Value = TowerElement> {
    prop::collection::vec((-20i64..=20, 1i64..=6), 4).prop_map(tower)
}

fn rational_strategy() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=20).prop_map(|(n, d)| Rational::from_ratio(n, d).unwrap())
}

fn admissible(x: &Rational) -> bool {
    !x.is_zero() && !x.is_one()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tower_ring_axioms(a in tower_strategy(), b in tower_strategy(), c in tower_strategy()) {
        let ab_c = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let a_bc = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let lhs = a.try_mul(&b.try_add(&c).unwrap()).unwrap();
        let rhs = a.try_mul(&b).unwrap().try_add(&a.try_mul(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        if !a.is_zero() {
            prop_assert!(a.try_mul(&a.try_inv().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn square_classes_multiply(a in tower_strategy(), b in tower_strategy()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let ab = a.try_mul(&b).unwrap().square_class().unwrap();
        prop_assert_eq!(ab, a.square_class().unwrap().product(&b.square_class().unwrap()));
        prop_assert!(a.try_mul(&a).unwrap().square_class().unwrap().is_identity());
    }

    #[test]
    fn sqrt_squares_back(a in tower_strategy()) {
        prop_assume!(!a.is_zero());
        let x = a.try_mul(&a).unwrap();
        let (r, _) = x.sqrt_positive(&x.context()).unwrap();
        prop_assert_eq!(r.try_mul(&r).unwrap(), x);
        prop_assert!(r.is_positive());
    }

    #[test]
    fn lambda_kills_r_relation(x in rational_strategy(), y in rational_strategy()) {
        prop_assume!(admissible(&x) && admissible(&y) && x != y);
        let r = r_relation(&x, &y).unwrap();
        let basis = lambda_basis(r.support());
        prop_assert!(lambda2(&r, &basis).unwrap().is_zero());
    }

    #[test]
    fn lambda1_kills_s_relation(x in rational_strategy(), y in rational_strategy()) {
        prop_assume!(admissible(&x) && admissible(&y) && x != y);
        prop_assert!(lambda1(&s_relation(&x, &y).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn halving_doubles(a in 2i64..40, b in 2i64..40) {
        let (x, y) = (TowerElement::from_i64(a), TowerElement::from_i64(-b));
        prop_assume!(a != b);
        let h = halve_wedge(&x, &y, &TowerContext::root()).unwrap();
        prop_assert_eq!(h.half.scale(&BigInt::from(2)), expand_wedge(&x, &y, &h.basis).unwrap());
    }

    #[test]
    fn mutated_certificates_fail(x in rational_strategy(), y in rational_strategy(), k in 2i64..5) {
        prop_assume!(admissible(&x) && admissible(&y) && x != y);
        let claim = IdentityClaim::new(s_relation(&x, &y).unwrap(), "relation");
        let term = |n: i64, a: &Rational, b: &Rational| CertificateTerm { coefficient: GroupRingElement::integer(n), x: a.clone(), y: b.clone() };
        prop_assert!(check_certificate(&claim, &Certificate::from_terms(vec![term(1, &x, &y)])).unwrap());
        prop_assert!(!check_certificate(&claim, &Certificate::from_terms(vec![term(k, &x, &y)])).unwrap());
        prop_assert!(!check_certificate(&claim, &Certificate::empty()).unwrap());
        let other = x.try_add(&Rational::from_i64(7)).unwrap();
        if admissible(&other) && other != y {
            prop_assert!(!check_certificate(&claim, &Certificate::from_terms(vec![term(1, &other, &y)])).unwrap());
        }
    }
}
