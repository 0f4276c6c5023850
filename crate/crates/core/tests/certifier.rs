use num_bigint::BigInt;
use refbloch_core::bloch::{c_element, psi, s_relation, RPElement};
use refbloch_core::certifier::*;
use refbloch_core::field::{Field, Rational, TowerClass, TowerContext, TowerElement};
use refbloch_core::square_algebra::GroupRingElement;
use refbloch_core::Error;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn t(n: i64) -> TowerElement {
    TowerElement::from_i64(n)
}

fn single(x: Rational, y: Rational, n: i64) -> Certificate<Rational> {
    Certificate::from_terms(vec![CertificateTerm {
        coefficient: GroupRingElement::integer(n),
        x,
        y,
    }])
}

#[test]
fn kernel_accepts_single_relation_and_rejects_scaled() {
    let claim = IdentityClaim::new(s_relation(&q(2), &q(3)).unwrap(), "S(2,3)");
    assert!(check_certificate(&claim, &single(q(2), q(3), 1)).unwrap());
    assert!(!check_certificate(&claim, &single(q(2), q(3), 2)).unwrap());
}

#[test]
fn kernel_errors_on_malformed_instances() {
    let claim = IdentityClaim::new(RPElement::zero(), "zero");
    for (x, y) in [(q(0), q(2)), (q(1), q(2)), (q(2), q(2)), (q(3), q(1))] {
        assert!(matches!(
            check_certificate(&claim, &single(x, y, 1)),
            Err(Error::InvalidArgument(_))
        ));
    }
}

#[test]
fn zero_claim_has_empty_certificate() {
    let claim = IdentityClaim::<Rational>::new(RPElement::zero(), "zero");
    match search_certificate(&claim, &[], &SearchConfig::default()).unwrap() {
        SearchOutcome::Found(c) => assert!(c.is_empty()),
        other => panic!("{other:?}"),
    }
}

#[test]
fn psi_square_instance_found_over_q() {
    let claim = psi_square_claim(1, &q(2)).unwrap();
    let expected = psi(1, &q(4)).unwrap()
        - psi(1, &q(-1)).unwrap().scale(
            &(&GroupRingElement::from_class(q(2).square_class().unwrap())
                - &GroupRingElement::one()),
        );
    assert_eq!(claim.target, expected);
    let SearchOutcome::Found(cert) =
        search_certificate(&claim, &[q(2)], &SearchConfig::default()).unwrap()
    else {
        panic!("not found");
    };
    assert!(check_certificate(&claim, &cert).unwrap());
}

#[test]
fn psi1_additivity_at_2_3_over_q() {
    let store = LocalStore::default();
    let prover = Prover::new(SearchConfig::default(), &store);
    let proved = prover.psi_additivity(1, &q(2), &q(3)).unwrap();
    assert!(check_certificate(&proved.claim, &proved.certificate).unwrap());
    assert_eq!(store.len(), 1);
}

#[test]
fn generator_alone_is_not_found_and_refuted() {
    let claim = IdentityClaim::new(RPElement::generator(q(2)).unwrap(), "[2]");
    let config = SearchConfig {
        pool_depth: 2,
        ..SearchConfig::default()
    };
    assert!(matches!(
        search_certificate(&claim, &[], &config).unwrap(),
        SearchOutcome::NotFound(_)
    ));
    assert!(matches!(
        refute_via_invariants(&claim).unwrap(),
        RefuteOutcome::Refuted(_)
    ));
}

#[test]
fn true_identities_are_not_refuted() {
    let claim = IdentityClaim::new(s_relation(&q(2), &q(3)).unwrap(), "S(2,3)");
    assert_eq!(
        refute_via_invariants(&claim).unwrap(),
        RefuteOutcome::Unknown
    );
    let claim = c_constant_claim(&q(2), &q(3)).unwrap();
    assert_eq!(
        refute_via_invariants(&claim).unwrap(),
        RefuteOutcome::Unknown
    );
    let claim = trivial_action_claim(&t(2)).unwrap();
    assert_eq!(
        refute_via_invariants(&claim).unwrap(),
        RefuteOutcome::Unknown
    );
}

#[test]
fn lambda2_refutes_in_both_backends() {
    let target = RPElement::from_terms([
        (q(3), GroupRingElement::one()),
        (q(-2), GroupRingElement::one()),
    ])
    .unwrap();
    let claim = IdentityClaim::new(target, "[3] + [-2]");
    assert!(matches!(
        refute_via_invariants(&claim).unwrap(),
        RefuteOutcome::Refuted(_)
    ));
    let gen = RPElement::generator(t(3)).unwrap();
    let claim = IdentityClaim::new(
        gen.clone() + gen.shift(&TowerClass::negative()),
        "(1 + <-1>)[3]",
    );
    assert!(matches!(
        refute_via_invariants(&claim).unwrap(),
        RefuteOutcome::Refuted(_)
    ));
}

#[test]
fn psi_identities_in_tower() {
    let store = LocalStore::default();
    let prover = Prover::new(SearchConfig::default(), &store);
    for i in [1u8, 2] {
        for (a, b) in [(2, 3), (2, 2), (-1, 2)] {
            for p in prover.psi_identities(i, &t(a), &t(b)).unwrap() {
                assert!(
                    check_certificate(&p.claim, &p.certificate).unwrap(),
                    "{}",
                    p.claim.label
                );
            }
        }
    }
}

#[test]
fn psi_vanishes_on_positives() {
    let store = LocalStore::default();
    let prover = Prover::new(SearchConfig::default(), &store);
    let one = prover.psi_vanish_positive(1, &t(1)).unwrap();
    assert!(one.certificate.is_empty());
    let (r6, ctx) = t(6).sqrt_positive(&TowerContext::root()).unwrap();
    let x = t(5).try_add(&r6.try_mul(&t(2)).unwrap()).unwrap();
    assert_eq!(ctx.depth(), 1);
    for i in [1u8, 2] {
        for v in [t(2), x.clone()] {
            let p = prover.psi_vanish_positive(i, &v).unwrap();
            assert_eq!(p.claim.target, psi(i, &v).unwrap());
            assert!(check_certificate(&p.claim, &p.certificate).unwrap());
        }
    }
    assert!(prover.psi_vanish_positive(1, &t(-2)).is_err());
}

#[test]
fn trivial_action_both_signs() {
    let store = LocalStore::default();
    let prover = Prover::new(SearchConfig::default(), &store);
    let (r2, _) = t(2).sqrt_positive(&TowerContext::root()).unwrap();
    for x in [t(2), t(-1), t(-3), r2.clone(), r2.negate()] {
        let p = prover.trivial_action(&x).unwrap();
        assert!(
            check_certificate(&p.claim, &p.certificate).unwrap(),
            "{}",
            x
        );
    }
}

#[test]
fn tower_only_tactics_reject_q() {
    let prover = Prover::new(SearchConfig::default(), &NoStore);
    assert!(matches!(
        prover.trivial_action(&q(2)),
        Err(TacticError::Failed(Error::TowerOnly))
    ));
    assert!(matches!(
        prover.psi_vanish_positive(1, &q(4)),
        Err(TacticError::Failed(Error::TowerOnly))
    ));
}

#[test]
fn c_constancy() {
    let prover = Prover::new(SearchConfig::default(), &NoStore);
    assert!(prover
        .c_constant(&q(2), &q(2))
        .unwrap()
        .certificate
        .is_empty());
    let p = prover.c_constant(&q(2), &q(3)).unwrap();
    assert!(check_certificate(&p.claim, &p.certificate).unwrap());
    let tp = Prover::new(SearchConfig::default(), &NoStore);
    let p = tp.c_constant(&t(2), &t(-1)).unwrap();
    assert!(check_certificate(&p.claim, &p.certificate).unwrap());
    let p = tp.c_symmetric(&t(-1)).unwrap();
    assert_eq!(
        p.claim.target,
        c_element(&t(-1)).unwrap().shift(&TowerClass::negative()) - c_element(&t(-1)).unwrap()
    );
    assert!(check_certificate(&p.claim, &p.certificate).unwrap());
}

#[test]
fn search_respects_column_bound() {
    let claim = c_constant_claim(&q(2), &q(3)).unwrap();
    let config = SearchConfig {
        max_columns: 10,
        ..SearchConfig::default()
    };
    assert!(matches!(
        search_certificate(&claim, &[], &config),
        Err(Error::TooLarge { bound: 10, .. })
    ));
}

#[test]
fn certificate_algebra() {
    let a = single(q(2), q(3), 1);
    let b = single(q(2), q(3), -1);
    assert!(a.plus(&b).is_empty());
    let twice = a.scale(&GroupRingElement::integer(2));
    assert_eq!(
        twice.terms()[0].coefficient,
        GroupRingElement::integer(BigInt::from(2))
    );
    let claim = IdentityClaim::new(
        s_relation(&q(2), &q(3))
            .unwrap()
            .scale_int(&BigInt::from(2)),
        "2S(2,3)",
    );
    assert!(check_certificate(&claim, &twice).unwrap());
}
