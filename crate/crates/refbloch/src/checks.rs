//! Seeded property checks over the constructive layer.
//!
//! Each check draws from its own stream, counts instances and keeps the
//! first few counterexamples.

use std::fmt;

use num_bigint::BigInt;
use rand::Rng;

use refbloch_core::bloch::{lambda1, lambda2, lambda_basis, r_relation, s_relation, RPElement};
use refbloch_core::certifier::{check_certificate, Certificate};
use refbloch_core::configurations::{
    boundary, canonicalize, induced_d1, ConfigChain, ConfigTuple, ProjPoint, RFModuleElement,
    ZTuple, INDUCED_D1_SIGN,
};
use refbloch_core::field::{Field, QClass, Rational, SquareClass, TowerElement};
use refbloch_core::milnor::{
    halve_positive_symbol, mod2_reduce, KMElement, MilnorSymbol, Mod2NormalForm,
};
use refbloch_core::square_algebra::{
    bracket, expand_wedge, halve_wedge, GroupRingElement, MultiplicativeBasis,
};

use crate::fixtures::{self, FixtureProof};
use crate::json::JsonField;
use crate::samples::{self, rng};

const KEPT_FAILURES: usize = 5;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub failures: Vec<String>,
    pub failed: usize,
}

impl Tally {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    pub fn record(&mut self, pass: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !pass {
            self.fail(what());
        }
    }

    /// Record an outcome whose error counts as a failure.
    pub fn record_result<E: fmt::Display>(
        &mut self,
        r: Result<bool, E>,
        what: impl FnOnce() -> String,
    ) {
        match r {
            Ok(pass) => self.record(pass, what),
            Err(e) => {
                self.checked += 1;
                self.fail(format!("{}: {e}", what()));
            }
        }
    }

    fn fail(&mut self, msg: String) {
        self.failed += 1;
        if self.failures.len() < KEPT_FAILURES {
            self.failures.push(msg);
        }
    }

    pub fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(f);
            }
        }
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} checked, {} failed", self.checked, self.failed)?;
        if let Some(first) = self.failures.first() {
            write!(f, "; first: {first}")?;
        }
        Ok(())
    }
}

/// Field axioms, `(√x)² = x` and sign-versus-enclosure agreement on triples
/// drawn from random towers of depth at most `max_depth`.
pub fn field_kernel(seed: u64, count: usize, max_depth: usize) -> Tally {
    let mut r = rng(seed, 1);
    let mut t = Tally::default();
    for _ in 0..count {
        let ctx = {
            let d = r.gen_range(0..=max_depth);
            samples::tower_context(&mut r, d)
        };
        let [a, b, c] = [0, 1, 2].map(|_| samples::tower_element(&mut r, &ctx));
        t.record_result(field_axioms(&a, &b, &c), || {
            format!("axioms at {a}, {b}, {c}")
        });
        t.record_result(sqrt_round_trip(&a), || format!("sqrt at {a}"));
        t.record(sign_agrees(&a), || format!("sign of {a}"));
    }
    t
}

fn field_axioms(
    a: &TowerElement,
    b: &TowerElement,
    c: &TowerElement,
) -> refbloch_core::Result<bool> {
    let add_assoc = a.try_add(b)?.try_add(c)? == a.try_add(&b.try_add(c)?)?;
    let mul_assoc = a.try_mul(b)?.try_mul(c)? == a.try_mul(&b.try_mul(c)?)?;
    let commute = a.try_add(b)? == b.try_add(a)? && a.try_mul(b)? == b.try_mul(a)?;
    let distribute = a.try_mul(&b.try_add(c)?)? == a.try_mul(b)?.try_add(&a.try_mul(c)?)?;
    let inverses = a.try_add(&a.negate())?.is_zero() && a.try_mul(&a.try_inv()?)?.is_one();
    let units = a.try_add(&TowerElement::zero())? == *a && a.try_mul(&TowerElement::one())? == *a;
    Ok(add_assoc && mul_assoc && commute && distribute && inverses && units)
}

fn sqrt_round_trip(a: &TowerElement) -> refbloch_core::Result<bool> {
    let x = a.abs();
    let (root, _) = x.sqrt_positive(&x.context())?;
    Ok(root.is_positive() && root.try_mul(&root)? == x)
}

fn sign_agrees(a: &TowerElement) -> bool {
    [8u32, 32, 128].iter().all(|&prec| {
        let (lo, hi) = a.enclosure(prec);
        let zero = Rational::from_integer(0.into());
        lo <= hi && (lo <= zero || a.is_positive()) && (hi >= zero || a.is_negative())
    }) && {
        let (lo, hi) = a.enclosure(128);
        let zero = Rational::from_integer(0.into());
        if a.is_positive() {
            lo > zero
        } else {
            hi < zero
        }
    }
}

/// Exactly two square classes occur, and classes multiply like signs.
pub fn tower_square_classes(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 2);
    let mut t = Tally::default();
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..count {
        let ctx = {
            let d = r.gen_range(0..=3);
            samples::tower_context(&mut r, d)
        };
        let (x, y) = (
            samples::tower_element(&mut r, &ctx),
            samples::tower_element(&mut r, &ctx),
        );
        let check = || -> refbloch_core::Result<bool> {
            let (cx, cy, cxy) = (
                x.square_class()?,
                y.square_class()?,
                x.try_mul(&y)?.square_class()?,
            );
            Ok(cxy == cx.product(&cy)
                && cxy.is_negative() == (cx.is_negative() ^ cy.is_negative())
                && cx.is_negative() == x.is_negative())
        };
        t.record_result(check(), || format!("class product at {x}, {y}"));
        if let Ok(c) = x.square_class() {
            seen.insert(c);
        }
    }
    t.record(seen.len() == 2, || {
        format!("{} square classes seen", seen.len())
    });
    t
}

/// A random pair for the wedge check: rationals or elements of a shallow tower.
fn wedge_pair(r: &mut impl Rng) -> (TowerElement, TowerElement) {
    let ctx = {
        let d = r.gen_range(0..=2);
        samples::tower_context(r, d)
    };
    loop {
        let (x, y) = if r.gen_bool(0.4) {
            (
                TowerElement::from_rational(samples::rational(r, 30)),
                TowerElement::from_rational(samples::rational(r, 30)),
            )
        } else {
            (
                samples::tower_element(r, &ctx),
                samples::tower_element(r, &ctx),
            )
        };
        if !x.abs().is_one() && !y.abs().is_one() {
            return (x, y);
        }
    }
}

/// `2·halve_wedge(x, y) = x∧y` over the halving basis.
pub fn wedge_halving(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 3);
    let mut t = Tally::default();
    for _ in 0..count {
        let (x, y) = wedge_pair(&mut r);
        let check = || -> refbloch_core::Result<bool> {
            let ctx = TowerElement::join_context(&x.context(), &y.context())?;
            let h = halve_wedge(&x, &y, &ctx)?;
            Ok(h.half.scale(&BigInt::from(2)) == expand_wedge(&x, &y, &h.basis)?)
        };
        t.record_result(check(), || format!("halving at {x}, {y}"));
    }
    t
}

/// `λ(R_{x,y}) = 0` over the prime basis of the support.
pub fn lambda_on_r(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 4);
    let mut t = Tally::default();
    for _ in 0..count {
        let (x, y) = rational_pair(&mut r);
        let check = || -> refbloch_core::Result<bool> {
            let rel = r_relation(&x, &y)?;
            let basis = lambda_basis(rel.support());
            Ok(lambda2(&rel, &basis)?.is_zero())
        };
        t.record_result(check(), || format!("lambda(R) at {x}, {y}"));
    }
    t
}

fn rational_pair(r: &mut impl Rng) -> (Rational, Rational) {
    loop {
        let (x, y) = (
            samples::rational_generic(r, 30),
            samples::rational_generic(r, 30),
        );
        if x != y {
            return (x, y);
        }
    }
}

/// Backends that can draw random pairs of distinct elements outside `{0, 1}`.
pub trait SampleField: JsonField {
    fn generic_pair(r: &mut impl Rng) -> (Self, Self);
    fn generic(r: &mut impl Rng) -> Self;
}

impl SampleField for Rational {
    fn generic_pair(r: &mut impl Rng) -> (Self, Self) {
        rational_pair(r)
    }

    fn generic(r: &mut impl Rng) -> Self {
        samples::rational_generic(r, 30)
    }
}

impl SampleField for TowerElement {
    fn generic_pair(r: &mut impl Rng) -> (Self, Self) {
        let ctx = {
            let d = r.gen_range(0..=2);
            samples::tower_context(r, d)
        };
        loop {
            let (x, y) = (
                samples::tower_generic(r, &ctx),
                samples::tower_generic(r, &ctx),
            );
            if x != y {
                return (x, y);
            }
        }
    }

    fn generic(r: &mut impl Rng) -> Self {
        let ctx = {
            let d = r.gen_range(0..=2);
            samples::tower_context(r, d)
        };
        samples::tower_generic(r, &ctx)
    }
}

/// `λ₁(S_{x,y}) = 0`.
pub fn lambda1_on_s<F: SampleField>(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 5);
    let mut t = Tally::default();
    for _ in 0..count {
        let (x, y) = F::generic_pair(&mut r);
        t.record_result(
            s_relation(&x, &y)
                .and_then(|s| lambda1(&s))
                .map(|l| l.is_zero()),
            || format!("lambda1(S) at {x}, {y}"),
        );
    }
    t
}

/// `λ₁([x]) = 0` for random tower elements.
pub fn lambda1_vanishes_on_tower(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 6);
    let mut t = Tally::default();
    for _ in 0..count {
        let x = TowerElement::generic(&mut r);
        t.record_result(
            RPElement::generator(x.clone())
                .and_then(|g| lambda1(&g))
                .map(|l| l.is_zero()),
            || format!("lambda1 at {x}"),
        );
    }
    t
}

/// Square-class algebra: `⟨⟨xy⟩⟩ = ⟨⟨x⟩⟩ + ⟨⟨y⟩⟩ + ⟨⟨x⟩⟩⟨⟨y⟩⟩`, augmentation
/// of brackets, and `⟨x⟩⟨x⟩ = 1`.
pub fn group_ring_algebra<F: SampleField>(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 7);
    let mut t = Tally::default();
    for _ in 0..count {
        let (x, y) = F::generic_pair(&mut r);
        let check = || -> refbloch_core::Result<bool> {
            let (bx, by) = (bracket(&x)?.into_ring(), bracket(&y)?.into_ring());
            let bxy = bracket(&x.try_mul(&y)?)?.into_ring();
            let product_rule = bxy == &(&bx + &by) + &(&bx * &by);
            let augmented = bx.epsilon() == BigInt::from(0);
            let cx = GroupRingElement::from_class(x.square_class()?);
            let involution = &cx * &cx == GroupRingElement::one();
            Ok(product_rule && augmented && involution)
        };
        t.record_result(check(), || format!("group ring at {x}, {y}"));
    }
    t
}

/// Mutate shipped certificates (coefficient, instance, deletion) and expect rejection.
pub fn mutated_certificates_rejected(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 8);
    let mut t = Tally::default();
    let proofs: Vec<FixtureProof<TowerElement>> = match fixtures::load(fixtures::TOWER_BUNDLE) {
        Ok(p) => p
            .into_iter()
            .filter(|p| !p.certificate.is_empty())
            .collect(),
        Err(e) => {
            t.record(false, || format!("fixture bundle: {e}"));
            return t;
        }
    };
    if proofs.is_empty() {
        t.record(false, || "no nonempty fixture certificates".into());
        return t;
    }
    for k in 0..count {
        let p = &proofs[r.gen_range(0..proofs.len())];
        let mut terms = p.certificate.terms().to_vec();
        let i = r.gen_range(0..terms.len());
        let kind = k % 3;
        match kind {
            0 => terms[i].coefficient = &terms[i].coefficient + &GroupRingElement::one(),
            1 => {
                let bumped = terms[i]
                    .x
                    .try_add(&TowerElement::from_i64(r.gen_range(1..5)));
                match bumped {
                    Ok(x) if !x.is_zero() && !x.is_one() && x != terms[i].y => terms[i].x = x,
                    _ => {
                        terms[i].coefficient = terms[i].coefficient.shift(&SquareClass::minus_one())
                            + GroupRingElement::one()
                    }
                }
            }
            _ => {
                terms.remove(i);
            }
        }
        let mutated = Certificate::from_terms(terms);
        let accepted = check_certificate(&p.claim, &mutated).unwrap_or(false);
        t.record(!accepted, || {
            format!("mutation {kind} of {} accepted", p.name)
        });
    }
    t
}

/// Every certificate in both shipped bundles passes the kernel.
pub fn shipped_fixtures_verify() -> Tally {
    let mut t = Tally::default();
    match fixtures::verify_shipped() {
        Ok(results) => {
            for (name, ok) in results {
                t.record(ok, || format!("fixture {name} fails"));
            }
        }
        Err(e) => t.record(false, || format!("fixture bundles: {e}")),
    }
    t
}

fn random_points(r: &mut impl Rng, n: usize) -> ConfigTuple<Rational> {
    loop {
        let mut points: Vec<ProjPoint<Rational>> = Vec::new();
        while points.len() < n {
            let p = if r.gen_bool(0.15) {
                ProjPoint::Infinity
            } else {
                ProjPoint::Finite(samples::rational(r, 9))
            };
            let p = match p {
                ProjPoint::Finite(_) if r.gen_bool(0.1) => {
                    ProjPoint::Finite(Rational::from_integer(0.into()))
                }
                p => p,
            };
            if !points.contains(&p) {
                points.push(p);
            }
        }
        if let Ok(t) = ConfigTuple::new(points) {
            return t;
        }
    }
}

/// Canonicalization invariance under `SL₂(ℚ)`.
pub fn canonicalize_invariance(seed: u64, group_elements: usize) -> Tally {
    let mut r = rng(seed, 9);
    let mut t = Tally::default();
    for _ in 0..group_elements {
        let g = samples::sl2_rational(&mut r);
        let tuple = {
            let n = r.gen_range(3..=6);
            random_points(&mut r, n)
        };
        let check = || -> refbloch_core::Result<bool> {
            Ok(canonicalize(&tuple.act(&g)?)? == canonicalize(&tuple)?)
        };
        t.record_result(check(), || format!("invariance at {tuple}"));
    }
    t
}

/// `canonicalize(representative(z)) = (⟨1⟩, z)`.
pub fn canonical_round_trip(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 10);
    let mut t = Tally::default();
    for _ in 0..count {
        let tuple = {
            let n = r.gen_range(3..=6);
            random_points(&mut r, n)
        };
        let check = || -> refbloch_core::Result<bool> {
            let (_, z) = canonicalize(&tuple)?;
            let (class, back) = canonicalize(&z.representative())?;
            Ok(class == QClass::identity() && back == z)
        };
        t.record_result(check(), || format!("round trip at {tuple}"));
    }
    t
}

/// `d∘d = 0` on tuples of length 2 to 7, and induced `d¹∘d¹ = 0` from `R_F[Z_2]`.
pub fn boundary_squares_to_zero(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 11);
    let mut t = Tally::default();
    for _ in 0..count {
        let tuple = {
            let n = r.gen_range(2..=7);
            random_points(&mut r, n)
        };
        let check = || -> refbloch_core::Result<bool> {
            Ok(boundary(&boundary(&ConfigChain::from_tuple(tuple.clone()))?)?.is_zero())
        };
        t.record_result(check(), || format!("d^2 at {tuple}"));
        let (a, b) = rational_pair(&mut r);
        let check = || -> refbloch_core::Result<bool> {
            let e = RFModuleElement::generator(ZTuple::new(vec![a.clone(), b.clone()])?);
            Ok(induced_d1(&induced_d1(&e)?)?.is_zero())
        };
        t.record_result(check(), || format!("induced d^2 at [{a}, {b}]"));
    }
    t
}

/// Induced `d¹[z] = INDUCED_D1_SIGN · λ₁([z])`, plus the value at `z = 2`.
pub fn induced_d1_matches_lambda1(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 12);
    let mut t = Tally::default();
    for _ in 0..count {
        let z = samples::rational_generic(&mut r, 30);
        let check =
            || -> refbloch_core::Result<bool> {
                let d = induced_d1(&RFModuleElement::generator(ZTuple::new(vec![z.clone()])?))?;
                let l = lambda1(&RPElement::generator(z.clone())?)?.into_ring();
                Ok(d.terms().count() <= 1
                    && d.scalar_part() == l.scale(&BigInt::from(INDUCED_D1_SIGN)))
            };
        t.record_result(check(), || format!("induced d1 at {z}"));
    }
    let class = |n: i64| {
        GroupRingElement::from_class(Rational::from_i64(n).square_class().expect("nonzero"))
    };
    let want = &(&(&class(-1) - &class(-2)) + &class(2)) - &class(1);
    let check = || -> refbloch_core::Result<bool> {
        let d = induced_d1(&RFModuleElement::generator(ZTuple::new(vec![
            Rational::from_i64(2),
        ])?))?;
        Ok(d.scalar_part() == want && d.terms().count() == 1)
    };
    t.record_result(check(), || "induced d1 at 2".into());
    t
}

/// `{x, 1−x} ↦ ZERO` over both signs of `x`, and `{−2, −3} ↦ {−1, −1}`.
pub fn milnor_mod2(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 13);
    let mut t = Tally::default();
    let mut signs = [0usize; 2];
    for _ in 0..count {
        let x = TowerElement::generic(&mut r);
        signs[usize::from(x.is_negative())] += 1;
        let check = || -> refbloch_core::Result<bool> {
            let s = MilnorSymbol::new(vec![x.clone(), x.one_minus()?])?;
            Ok(mod2_reduce(&s)? == Mod2NormalForm::Zero)
        };
        t.record_result(check(), || format!("mod2 of {{{x}, 1-x}}"));
    }
    t.record(count < 10 || (signs[0] > 0 && signs[1] > 0), || {
        format!("sign coverage {signs:?}")
    });
    let check = || -> refbloch_core::Result<bool> {
        let s = MilnorSymbol::new(vec![TowerElement::from_i64(-2), TowerElement::from_i64(-3)])?;
        Ok(mod2_reduce(&s)? == Mod2NormalForm::MinusOnes(2))
    };
    t.record_result(check(), || "mod2 of {-2, -3}".into());
    t
}

/// `2·halve_positive_symbol(s) = s` over a basis holding the adjoined root.
pub fn milnor_halving(seed: u64, count: usize) -> Tally {
    let mut r = rng(seed, 14);
    let mut t = Tally::default();
    for _ in 0..count {
        let degree = r.gen_range(1..=3);
        let entries: Vec<TowerElement> = (0..degree)
            .map(|_| loop {
                let a = TowerElement::from_rational(samples::rational_positive(&mut r, 40));
                if !a.is_one() {
                    break a;
                }
            })
            .collect();
        let check = || -> refbloch_core::Result<bool> {
            let s = MilnorSymbol::new(entries.clone())?;
            let w = halve_positive_symbol(&s)?;
            let root = w
                .terms()
                .next()
                .map(|(h, _)| h.entries()[0].clone())
                .unwrap_or_else(TowerElement::one);
            let basis = halving_basis(&root, &entries)?;
            Ok(w.scale(&BigInt::from(2)).expand(&basis)? == KMElement::symbol(s).expand(&basis)?)
        };
        t.record_result(check(), || format!("halving of {entries:?}"));
    }
    t
}

/// Independent basis for positive rational entries and the root of the
/// first: the primes involved, with one prime of the radicand traded for
/// the radical.
fn halving_basis(
    root: &TowerElement,
    entries: &[TowerElement],
) -> refbloch_core::Result<MultiplicativeBasis<TowerElement>> {
    let mut values: Vec<Rational> = entries
        .iter()
        .filter_map(|a| a.as_rational().cloned())
        .collect();
    let radicand = root
        .context_ref()
        .radicands()
        .first()
        .and_then(|r| r.as_rational().cloned());
    values.extend(radicand.iter().cloned());
    let primes: Vec<TowerElement> = MultiplicativeBasis::primes_covering(values.iter()).elements()
        [1..]
        .iter()
        .map(|p| TowerElement::from_rational(p.clone()))
        .collect();
    if radicand.is_none() {
        return MultiplicativeBasis::new(primes);
    }
    let radical = TowerElement::radical(root.context_ref(), 0);
    for skip in 0..primes.len() {
        let mut candidate = vec![radical.clone()];
        candidate.extend(
            primes
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, p)| p.clone()),
        );
        let basis = MultiplicativeBasis::new(candidate)?;
        if std::iter::once(root)
            .chain(entries)
            .all(|a| basis.factor(a).is_ok())
        {
            return Ok(basis);
        }
    }
    Err(refbloch_core::Error::InvalidArgument(format!(
        "no halving basis for {root}"
    )))
}
