use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refbloch_core::bloch::lambda1;
use refbloch_core::bloch::RPElement;
use refbloch_core::configurations::*;
use refbloch_core::field::{Field, QClass, Rational, TowerElement};
use refbloch_core::square_algebra::GroupRingElement;
use refbloch_core::Error;

type P = ProjPoint<Rational>;

fn q(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn pt(n: i64) -> P {
    P::from_i64(n)
}

fn random_q(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-30..=30);
        let d: i64 = rng.gen_range(1..=12);
        if n != 0 {
            return Rational::from_ratio(n, d).unwrap();
        }
    }
}

fn random_sl2(rng: &mut ChaCha8Rng) -> SL2Matrix<Rational> {
    // (a b / c d) with d = (1 + bc)/a
    let a = random_q(rng);
    let b = random_q(rng);
    let c = random_q(rng);
    let d = q(1)
        .try_add(&b.try_mul(&c).unwrap())
        .unwrap()
        .try_div(&a)
        .unwrap();
    SL2Matrix::new(a, b, c, d).unwrap()
}

fn random_points(rng: &mut ChaCha8Rng, n: usize) -> ConfigTuple<Rational> {
    let mut pts: Vec<P> = Vec::new();
    if rng.gen_bool(0.3) {
        pts.push(P::Infinity);
    }
    while pts.len() < n {
        let p = P::finite(random_q(rng));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let k = rng.gen_range(0..n);
    pts.swap(0, k);
    ConfigTuple::new(pts).unwrap()
}

fn class(n: i64) -> GroupRingElement<QClass> {
    GroupRingElement::from_class(q(n).square_class().unwrap())
}

#[test]
fn moebius_basics() {
    let id = SL2Matrix::<Rational>::identity();
    assert_eq!(moebius_apply(&id, &pt(5)).unwrap(), pt(5));
    assert_eq!(
        moebius_apply(&SL2Matrix::omega(), &P::Infinity).unwrap(),
        pt(0)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..30 {
        let (g, h) = (random_sl2(&mut rng), random_sl2(&mut rng));
        let p = if rng.gen_bool(0.2) {
            P::Infinity
        } else {
            P::finite(random_q(&mut rng))
        };
        let lhs = moebius_apply(&g, &moebius_apply(&h, &p).unwrap()).unwrap();
        assert_eq!(lhs, moebius_apply(&g.try_mul(&h).unwrap(), &p).unwrap());
        assert_eq!(
            moebius_apply(&g.inverse(), &moebius_apply(&g, &p).unwrap()).unwrap(),
            p
        );
    }
}

#[test]
fn determinant_enforced() {
    assert!(SL2Matrix::new(q(2), q(0), q(0), q(1)).is_err());
}

#[test]
fn pair_witnesses() {
    let w = pair_witness(&P::Infinity, &pt(0)).unwrap();
    assert!(w.in_torus());
    let w = pair_witness(&pt(0), &P::Infinity).unwrap();
    assert_eq!(moebius_apply(&w, &pt(0)).unwrap(), P::Infinity);
    assert_eq!(moebius_apply(&w, &P::Infinity).unwrap(), pt(0));
    assert!(w.try_mul(&SL2Matrix::omega()).unwrap().in_torus());
    assert!(pair_witness(&pt(3), &pt(3)).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let t = random_points(&mut rng, 2);
        let [p0, p1] = [&t.points()[0], &t.points()[1]];
        let g = pair_witness(p0, p1).unwrap();
        assert_eq!(moebius_apply(&g, p0).unwrap(), P::Infinity);
        assert_eq!(moebius_apply(&g, p1).unwrap(), pt(0));
    }
}

#[test]
fn triple_witnesses() {
    assert!(matches!(
        triple_witness(&pt(2), &pt(3), &pt(7)),
        Err(Error::NoSl2Witness(_))
    ));
    let g = triple_witness(&pt(1), &P::Infinity, &pt(5)).unwrap();
    assert_eq!(moebius_apply(&g, &pt(1)).unwrap(), pt(0));
    assert_eq!(moebius_apply(&g, &P::Infinity).unwrap(), P::Infinity);
    assert_eq!(moebius_apply(&g, &pt(5)).unwrap(), pt(1));
    assert!(matches!(
        triple_witness(&pt(0), &P::Infinity, &pt(2)),
        Err(Error::NoSl2Witness(_))
    ));
    let r2 = TowerElement::from_i64(2);
    let g = triple_witness(
        &ProjPoint::from_i64(0),
        &ProjPoint::Infinity,
        &ProjPoint::finite(r2),
    )
    .unwrap();
    assert_eq!(
        moebius_apply(&g, &ProjPoint::from_i64(0)).unwrap(),
        ProjPoint::from_i64(0)
    );
}

#[test]
fn phi_branches() {
    assert_eq!(phi(&pt(0), &P::Infinity, &pt(1)).unwrap(), q(1));
    assert_eq!(phi(&P::Infinity, &pt(1), &pt(2)).unwrap(), q(-1));
    assert_eq!(phi(&pt(0), &pt(1), &pt(2)).unwrap(), q(-2));
    assert_eq!(phi(&pt(0), &pt(1), &P::Infinity).unwrap(), q(-1));
    assert!(phi(&pt(0), &pt(0), &pt(2)).is_err());
}

#[test]
fn canonical_representatives() {
    let z = ZTuple::new(vec![q(2)]).unwrap();
    let (c, back) = canonicalize(&z.representative()).unwrap();
    assert!(c == q(1).square_class().unwrap() && back == z);
    let z = ZTuple::new(vec![q(2), q(3)]).unwrap();
    assert_eq!(
        z.representative().points(),
        &[pt(0), P::Infinity, pt(1), pt(2), pt(3)]
    );
    assert_eq!(canonicalize(&z.representative()).unwrap().1, z);
    assert!(canonicalize(&ConfigTuple::new(vec![pt(0), pt(1)]).unwrap()).is_err());
    assert!(ZTuple::new(vec![q(1)]).is_err());
    assert!(ZTuple::new(vec![q(2), q(2)]).is_err());
}

#[test]
fn canonicalize_is_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..50 {
        let t = random_points(&mut rng, 3 + i % 4);
        let g = random_sl2(&mut rng);
        assert_eq!(
            canonicalize(&t.act(&g).unwrap()).unwrap(),
            canonicalize(&t).unwrap(),
            "{t}"
        );
    }
}

#[test]
fn boundary_formula_and_square() {
    let t = ConfigTuple::new(vec![pt(0), P::Infinity, pt(1), pt(2)]).unwrap();
    let d = boundary(&ConfigChain::from_tuple(t)).unwrap();
    let mut want = ConfigChain::zero();
    for (pts, n) in [
        (vec![P::Infinity, pt(1), pt(2)], 1),
        (vec![pt(0), pt(1), pt(2)], -1),
        (vec![pt(0), P::Infinity, pt(2)], 1),
        (vec![pt(0), P::Infinity, pt(1)], -1),
    ] {
        want.add_term(ConfigTuple::new(pts).unwrap(), BigInt::from(n));
    }
    assert_eq!(d, want);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let c = ConfigChain::from_tuple(random_points(&mut rng, 5));
        assert!(boundary(&boundary(&c).unwrap()).unwrap().is_zero());
    }
    let two = ConfigChain::from_tuple(ConfigTuple::new(vec![pt(4), pt(5)]).unwrap());
    assert_eq!(boundary(&two).unwrap().terms().count(), 2);
}

#[test]
fn induced_d1_at_two() {
    let e = RFModuleElement::generator(ZTuple::new(vec![q(2)]).unwrap());
    let d = induced_d1(&e).unwrap();
    let want = &(&(&class(-1) - &class(-2)) + &class(2)) - &class(1);
    assert_eq!(d.scalar_part(), want);
    assert_eq!(d.terms().count(), 1);
    let t = RFModuleElement::generator(ZTuple::new(vec![TowerElement::from_i64(2)]).unwrap());
    assert!(induced_d1(&t).unwrap().is_zero());
}

#[test]
fn induced_d1_matches_lambda1() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let z = random_q(&mut rng);
        if z.is_one() {
            continue;
        }
        let d = induced_d1(&RFModuleElement::generator(
            ZTuple::new(vec![z.clone()]).unwrap(),
        ))
        .unwrap();
        let l = lambda1(&RPElement::generator(z).unwrap())
            .unwrap()
            .into_ring();
        assert_eq!(d.scalar_part(), l.scale(&BigInt::from(INDUCED_D1_SIGN)));
    }
}

#[test]
fn induced_d1_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let (a, b) = (random_q(&mut rng), random_q(&mut rng));
        if a == b || a.is_one() || b.is_one() {
            continue;
        }
        let e = RFModuleElement::generator(ZTuple::new(vec![a, b]).unwrap());
        let once = induced_d1(&e).unwrap();
        assert!(once.terms().all(|(t, _)| t.len() == 1));
        assert!(induced_d1(&once).unwrap().is_zero());
    }
}

#[test]
fn stabilizers() {
    let t = SL2Matrix::diagonal(&q(3)).unwrap();
    let pair = ConfigTuple::new(vec![P::Infinity, pt(0)]).unwrap();
    assert!(t.in_torus() && stabilizes(&t, &pair).unwrap());
    let b = SL2Matrix::new(q(2), q(5), q(0), Rational::from_ratio(1, 2).unwrap()).unwrap();
    assert!(b.in_borel() && !b.in_torus());
    assert!(stabilizes(&b, &ConfigTuple::new(vec![P::Infinity]).unwrap()).unwrap());
    assert!(!stabilizes(&b, &pair).unwrap());
}
