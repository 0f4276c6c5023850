use num_bigint::BigInt;
use num_traits::Signed;

use super::*;
use crate::field::{Field, QClass, Rational, SquareClass, TowerClass, TowerContext, TowerElement};
use crate::square_algebra::{bracket, expand_sym, GroupRingElement, MultiplicativeBasis};

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn t(n: i64) -> TowerElement {
    TowerElement::from_i64(n)
}

#[test]
fn r_relation_shape_and_lambda() {
    let r = r_relation(&q(2), &q(3)).unwrap();
    assert!(r.len() <= 5);
    let basis = lambda_basis(r.support());
    assert!(lambda2(&r, &basis).unwrap().is_zero());
}

#[test]
fn coinvariants_of_s_is_r() {
    for (x, y) in [(2, 3), (-1, 2), (5, -7), (1, 3)]
        .iter()
        .filter(|(x, _)| *x != 1)
    {
        assert_eq!(
            coinvariants(&s_relation(&q(*x), &q(*y)).unwrap()),
            r_relation(&q(*x), &q(*y)).unwrap()
        );
    }
    assert!(s_relation(&q(1), &q(3)).is_err());
    assert!(s_relation(&q(3), &q(3)).is_err());
    assert!(s_relation(&q(0), &q(3)).is_err());
}

#[test]
fn lambda1_kills_relations() {
    assert!(lambda1(&s_relation(&q(2), &q(3)).unwrap())
        .unwrap()
        .is_zero());
    assert!(lambda1(&s_relation(&q(5), &q(7)).unwrap())
        .unwrap()
        .is_zero());
    assert!(lambda1(&s_relation(&t(2), &t(3)).unwrap())
        .unwrap()
        .is_zero());
}

#[test]
fn tower_relation_coefficients_are_signed_units() {
    let s = s_relation(&t(2), &t(3)).unwrap();
    for (_, r) in s.terms() {
        let terms: alloc::vec::Vec<_> = r.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].1.abs(), BigInt::from(1));
    }
}

#[test]
fn lambda1_of_two_over_rationals() {
    let got = lambda1(&RPElement::generator(q(2)).unwrap()).unwrap();
    let want = bracket(&q(-1)).unwrap().into_ring() * bracket(&q(2)).unwrap().into_ring();
    assert_eq!(got.as_ring(), &want);
    assert!(!got.is_zero());
}

#[test]
fn lambda1_vanishes_on_tower_generators() {
    let (r2, ctx) = t(2).sqrt_positive(&TowerContext::root()).unwrap();
    let (r3, _) = t(3).sqrt_positive(&ctx).unwrap();
    for x in [
        t(2),
        t(-5),
        r2.clone(),
        r2.try_sub(&r3).unwrap(),
        TowerElement::from_ratio(1, 3).unwrap(),
    ] {
        assert!(lambda1(&RPElement::generator(x).unwrap())
            .unwrap()
            .is_zero());
    }
}

#[test]
fn lambda2_examples() {
    let x = q(5);
    let p = PElement::from_terms([(x.clone(), BigInt::from(1)), (q(-4), BigInt::from(1))]).unwrap();
    let basis = lambda_basis(p.support());
    assert!(lambda2(&p, &basis).unwrap().is_zero());
    let m = PElement::generator(q(-1)).unwrap();
    let basis = MultiplicativeBasis::primes_covering(&[q(2)]);
    assert_eq!(
        lambda2(&m, &basis).unwrap(),
        expand_sym(&q(2), &q(-1), &basis).unwrap()
    );
}

#[test]
fn psi_special_values() {
    assert!(psi1(&q(1)).unwrap().is_zero());
    assert!(psi2(&q(1)).unwrap().is_zero());
    let m1 = psi1(&q(-1)).unwrap();
    let coeff = &GroupRingElement::one() + &GroupRingElement::from_class(QClass::minus_one());
    assert_eq!(m1, RPElement::term(coeff, q(-1)).unwrap());
    assert!(psi1(&q(0)).is_err());
    assert_eq!(alloc::format!("{}", m1), "(<1> + <-1>)[-1]");
}

#[test]
fn coinvariant_examples() {
    let x = q(7);
    let g = RPElement::generator(x.clone()).unwrap();
    let twisted = &g.shift(&QClass::minus_one()) - &g;
    assert!(coinvariants(&twisted).is_zero());
    let want = PElement::from_terms([
        (x.clone(), BigInt::from(1)),
        (x.try_inv().unwrap(), BigInt::from(1)),
    ])
    .unwrap();
    assert_eq!(coinvariants(&psi1(&x).unwrap()), want);
}

#[test]
fn c_element_image_and_lambda() {
    for n in [2, 3, -1, -5, 7] {
        let x = q(n);
        let c = c_element(&x).unwrap();
        let want = PElement::from_terms([
            (x.clone(), BigInt::from(1)),
            (x.one_minus().unwrap(), BigInt::from(1)),
        ])
        .unwrap();
        assert_eq!(coinvariants(&c), want);
        let basis = lambda_basis(c.support());
        assert!(
            big_lambda(&c, &basis).unwrap().is_zero(),
            "Λ(C({})) should vanish",
            n
        );
    }
    assert!(c_element(&q(1)).is_err());
}

#[test]
fn big_lambda_of_generator_is_nonzero() {
    let g = RPElement::generator(q(2)).unwrap();
    let basis = lambda_basis(g.support());
    let l = big_lambda(&g, &basis).unwrap();
    assert!(!l.first.is_zero());
    assert!(!l.second.is_zero());
    assert!(big_lambda(&RPElement::<Rational>::zero(), &basis)
        .unwrap()
        .is_zero());
}

#[test]
fn tower_classes_only_two() {
    let s = s_relation(&t(-3), &t(5)).unwrap();
    for (_, r) in s.terms() {
        for c in r.classes() {
            assert!(*c == TowerClass::positive() || *c == TowerClass::negative());
        }
    }
}
