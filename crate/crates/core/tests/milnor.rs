use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refbloch_core::field::{Field, Rational, TowerContext, TowerElement};
use refbloch_core::milnor::*;
use refbloch_core::square_algebra::MultiplicativeBasis;
use refbloch_core::Error;

fn t(n: i64) -> TowerElement {
    TowerElement::from_i64(n)
}

fn sym(v: &[i64]) -> MilnorSymbol<TowerElement> {
    MilnorSymbol::new(v.iter().map(|&n| t(n)).collect()).unwrap()
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> TowerElement {
    loop {
        let n: i64 = rng.gen_range(-40..=40);
        let d: i64 = rng.gen_range(1..=9);
        if n != 0 && n != d {
            return TowerElement::from_ratio(n, d).unwrap();
        }
    }
}

#[test]
fn products() {
    let a = KMElement::symbol(sym(&[2]));
    let b = KMElement::symbol(sym(&[3]));
    assert_eq!(a.product(&b), KMElement::symbol(sym(&[2, 3])));
    let unit = KMElement::symbol(MilnorSymbol::unit());
    assert_eq!(unit.product(&a), a);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let [x, y, z] = [0, 1, 2]
            .map(|_| KMElement::symbol(MilnorSymbol::new(vec![random_nonzero(&mut rng)]).unwrap()));
        assert_eq!(x.product(&y).product(&z), x.product(&y.product(&z)));
    }
    assert!(MilnorSymbol::new(vec![t(0)]).is_err());
}

#[test]
fn mod2_examples() {
    assert_eq!(mod2_reduce(&sym(&[2, 3])).unwrap(), Mod2NormalForm::Zero);
    assert_eq!(
        mod2_reduce(&sym(&[-2, -3])).unwrap(),
        Mod2NormalForm::MinusOnes(2)
    );
    assert_eq!(mod2_reduce(&sym(&[-5, 6])).unwrap(), Mod2NormalForm::Zero);
    assert_eq!(Mod2NormalForm::MinusOnes(2).to_string(), "{-1, -1}");
    let q = MilnorSymbol::new(vec![Rational::from_i64(2)]).unwrap();
    assert_eq!(mod2_reduce(&q), Err(Error::TowerOnly));
}

#[test]
fn mod2_is_multiplicative_in_signs() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let a = random_nonzero(&mut rng);
        let rest = MilnorSymbol::new(
            (0..rng.gen_range(0..4))
                .map(|_| random_nonzero(&mut rng))
                .collect(),
        )
        .unwrap();
        let whole = MilnorSymbol::new(vec![a.clone()]).unwrap().concat(&rest);
        let expected = match (a.is_positive(), mod2_reduce(&rest).unwrap()) {
            (true, _) | (_, Mod2NormalForm::Zero) => Mod2NormalForm::Zero,
            (false, Mod2NormalForm::MinusOnes(n)) => Mod2NormalForm::MinusOnes(n + 1),
        };
        assert_eq!(mod2_reduce(&whole).unwrap(), expected);
    }
}

#[test]
fn steinberg_compatibility() {
    assert!(steinberg_trivial(&sym(&[1, 7])));
    assert!(steinberg_trivial(&sym(&[2, -1])));
    assert!(!steinberg_trivial(&sym(&[2, 3])));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let x = random_nonzero(&mut rng);
        let s = MilnorSymbol::new(vec![x.clone(), x.one_minus().unwrap()]).unwrap();
        assert!(steinberg_trivial(&s));
        assert_eq!(mod2_reduce(&s).unwrap(), Mod2NormalForm::Zero);
    }
    for pattern in 0..8u32 {
        let v: Vec<i64> = (0..3)
            .map(|i| if pattern >> i & 1 == 1 { -3 } else { 4 })
            .collect();
        let s = sym(&v);
        if steinberg_trivial(&s) {
            assert_eq!(mod2_reduce(&s).unwrap(), Mod2NormalForm::Zero);
        }
        let nf = mod2_reduce(&s).unwrap();
        assert!(nf == Mod2NormalForm::Zero || nf == Mod2NormalForm::MinusOnes(3));
    }
}

#[test]
fn halving() {
    assert_eq!(
        halve_positive_symbol(&sym(&[4, 9])).unwrap(),
        KMElement::symbol(sym(&[2, 9]))
    );
    let (r2, _) = t(2).sqrt_positive(&TowerContext::root()).unwrap();
    let h = halve_positive_symbol(&sym(&[2, 3])).unwrap();
    assert_eq!(
        h,
        KMElement::symbol(MilnorSymbol::new(vec![r2, t(3)]).unwrap())
    );
    assert!(halve_positive_symbol(&MilnorSymbol::<TowerElement>::unit()).is_err());
    assert!(halve_positive_symbol(&sym(&[2, -3])).is_err());
}

#[test]
fn halving_doubles_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..20 {
        let s = MilnorSymbol::new(
            (0..rng.gen_range(1..4))
                .map(|_| random_nonzero(&mut rng).abs())
                .collect(),
        )
        .unwrap();
        let w = halve_positive_symbol(&s).unwrap();
        let root = w.terms().next().unwrap().0.entries()[0].clone();
        let mut basis = MultiplicativeBasis::new(vec![]).unwrap();
        for a in std::iter::once(&root)
            .chain(&s.entries()[1..])
            .filter(|a| !a.is_one())
        {
            basis.insert(a.clone());
        }
        let doubled = w.scale(&BigInt::from(2)).expand(&basis).unwrap();
        assert_eq!(
            doubled,
            KMElement::symbol(s.clone()).expand(&basis).unwrap(),
            "{s}"
        );
    }
}
