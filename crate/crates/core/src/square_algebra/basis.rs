use alloc::string::ToString;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{rational_to_f64, Field, Rational, TowerElement};
use crate::linalg::{solve_integer, SparseVec};

/// Largest exponent accepted in a tower factorization.
pub const EXPONENT_BOUND: i64 = 64;

/// Fields whose elements can be written as products of powers of a basis.
pub trait Factorize: Field {
    /// Exponents `e` with `x = ∏ basis[i]^e[i]`.
    fn factor_over(x: &Self, basis: &[Self]) -> Result<Vec<i64>>;
}

/// An ordered list of nonzero elements treated as a multiplicatively free basis.
///
/// The order fixes the sign conventions of `∘` and `∧` coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicativeBasis<F> {
    elements: Vec<F>,
}

impl<F: Field> MultiplicativeBasis<F> {
    pub fn new(elements: Vec<F>) -> Result<Self> {
        let mut out = MultiplicativeBasis {
            elements: Vec::with_capacity(elements.len()),
        };
        for e in elements {
            if e.is_zero() {
                return Err(Error::InvalidArgument(
                    "zero in a multiplicative basis".to_string(),
                ));
            }
            if out.elements.contains(&e) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "{} repeated in basis",
                    e
                )));
            }
            out.elements.push(e);
        }
        Ok(out)
    }

    pub fn elements(&self) -> &[F] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, x: &F) -> Option<usize> {
        self.elements.iter().position(|e| e == x)
    }

    /// Append `x` unless already present; returns its index.
    pub fn insert(&mut self, x: F) -> usize {
        match self.index_of(&x) {
            Some(i) => i,
            None => {
                self.elements.push(x);
                self.elements.len() - 1
            }
        }
    }
}

impl<F: Factorize> MultiplicativeBasis<F> {
    pub fn factor(&self, x: &F) -> Result<Vec<i64>> {
        if let Some(i) = self.index_of(x) {
            let mut e = alloc::vec![0; self.len()];
            e[i] = 1;
            return Ok(e);
        }
        F::factor_over(x, &self.elements)
    }
}

impl MultiplicativeBasis<Rational> {
    /// `−1` followed by every prime dividing a numerator or denominator of `values`, ascending.
    pub fn primes_covering<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Self {
        let mut primes: Vec<BigUint> = Vec::new();
        for v in values {
            if Zero::is_zero(v) {
                continue;
            }
            for n in [v.numer().magnitude(), v.denom().magnitude()] {
                for (p, _) in crate::field::factorize(n) {
                    primes.push(p);
                }
            }
        }
        primes.sort();
        primes.dedup();
        let mut elements = alloc::vec![Rational::from_integer(BigInt::from(-1))];
        elements.extend(
            primes
                .into_iter()
                .map(|p| Rational::from_integer(BigInt::from(p))),
        );
        MultiplicativeBasis { elements }
    }
}

fn not_factorable<F: Field>(x: &F) -> Error {
    Error::NotFactorable(x.to_string())
}

fn sign_index<F: Field>(basis: &[F]) -> Option<usize> {
    let m1 = F::from_i64(-1);
    basis.iter().position(|b| *b == m1)
}

/// Fix the exponent of `−1` so the signs agree; exponents elsewhere are final.
fn settle_sign<F: Field>(x: &F, basis: &[F], e: &mut [i64]) -> Result<()> {
    let mut neg = false;
    for (b, k) in basis.iter().zip(e.iter()) {
        if b.is_negative() && k.rem_euclid(2) == 1 {
            neg = !neg;
        }
    }
    if neg == x.is_negative() {
        return Ok(());
    }
    match sign_index(basis) {
        Some(i) => {
            e[i] = if e[i].rem_euclid(2) == 1 { 0 } else { 1 };
            Ok(())
        }
        None => Err(not_factorable(x)),
    }
}

fn valuation(n: &BigUint, p: &BigUint) -> i64 {
    let mut n = n.clone();
    let mut k = 0;
    while !n.is_zero() && (&n % p).is_zero() {
        n /= p;
        k += 1;
    }
    k
}

fn rational_valuation(q: &Rational, p: &BigUint) -> i64 {
    valuation(q.numer().magnitude(), p) - valuation(q.denom().magnitude(), p)
}

/// Solve the valuation system `Σ e_j v_p(b_j) = v_p(x)` over the given moduli.
fn valuation_system(
    moduli: &[BigUint],
    x: &Rational,
    basis: &[Option<Rational>],
    with_kernel: bool,
) -> Option<(Vec<i64>, Vec<Vec<i64>>)> {
    let columns: Vec<SparseVec> = basis
        .iter()
        .map(|b| match b {
            None => Vec::new(),
            Some(b) => moduli
                .iter()
                .enumerate()
                .map(|(i, p)| (i, BigInt::from(rational_valuation(b, p))))
                .collect(),
        })
        .collect();
    let target: SparseVec = moduli
        .iter()
        .enumerate()
        .map(|(i, p)| (i, BigInt::from(rational_valuation(x, p))))
        .collect();
    let sol = solve_integer(&columns, &target, with_kernel)?;
    let conv = |v: &[BigInt]| -> Option<Vec<i64>> { v.iter().map(|e| e.to_i64()).collect() };
    let particular = conv(&sol.particular)?;
    let kernel = sol
        .kernel
        .iter()
        .map(|k| conv(k))
        .collect::<Option<Vec<_>>>()?;
    Some((particular, kernel))
}

impl Factorize for Rational {
    fn factor_over(x: &Rational, basis: &[Rational]) -> Result<Vec<i64>> {
        if Zero::is_zero(x) {
            return Err(Error::Field(crate::field::FieldError::ZeroClass));
        }
        let mut primes: Vec<BigUint> = Vec::new();
        for v in basis.iter().chain(core::iter::once(x)) {
            for n in [v.numer().magnitude(), v.denom().magnitude()] {
                for (p, _) in crate::field::factorize(n) {
                    primes.push(p);
                }
            }
        }
        primes.sort();
        primes.dedup();
        let cols: Vec<Option<Rational>> = basis
            .iter()
            .map(|b| {
                if One::is_one(&Signed::abs(b)) {
                    None
                } else {
                    Some(b.clone())
                }
            })
            .collect();
        let (mut e, _) =
            valuation_system(&primes, x, &cols, false).ok_or_else(|| not_factorable(x))?;
        settle_sign(x, basis, &mut e)?;
        Ok(e)
    }
}

/// Pairwise coprime integers such that every input is a product of their powers.
pub fn coprime_base(inputs: &[BigUint]) -> Vec<BigUint> {
    let mut base: Vec<BigUint> = Vec::new();
    let mut pending: Vec<BigUint> = inputs
        .iter()
        .filter(|n| !n.is_one() && !n.is_zero())
        .cloned()
        .collect();
    while let Some(a) = pending.pop() {
        if a.is_one() {
            continue;
        }
        match base.iter().position(|b| !a.gcd(b).is_one()) {
            Some(i) => {
                let b = base.swap_remove(i);
                let g = a.gcd(&b);
                for v in [&a / &g, &b / &g, g] {
                    if !v.is_one() {
                        pending.push(v);
                    }
                }
            }
            None => base.push(a),
        }
    }
    base.sort();
    base
}

impl Factorize for TowerElement {
    /// Exact rows come from valuations of absolute norms over a coprime base;
    /// the leftover lattice directions (units) are pinned by `log|·|` and then
    /// every candidate is verified by exact multiplication.
    fn factor_over(x: &TowerElement, basis: &[TowerElement]) -> Result<Vec<i64>> {
        if x.is_zero() {
            return Err(Error::Field(crate::field::FieldError::ZeroClass));
        }
        let mut ctx = x.context();
        for b in basis {
            ctx = TowerElement::join_context(&ctx, &b.context())?;
        }
        let one = TowerElement::one();
        let norms: Vec<Option<Rational>> = basis
            .iter()
            .map(|b| {
                if b.abs() == one {
                    Ok(None)
                } else {
                    b.absolute_norm_in(&ctx).map(Some)
                }
            })
            .collect::<core::result::Result<_, _>>()?;
        let nx = x.absolute_norm_in(&ctx)?;
        let mut ints: Vec<BigUint> = Vec::new();
        for n in norms.iter().flatten().chain(core::iter::once(&nx)) {
            ints.push(n.numer().magnitude().clone());
            ints.push(n.denom().magnitude().clone());
        }
        let moduli = coprime_base(&ints);
        let (e0, kernel) =
            valuation_system(&moduli, &nx, &norms, true).ok_or_else(|| not_factorable(x))?;

        let logs: Vec<f64> = basis
            .iter()
            .zip(&norms)
            .map(|(b, n)| if n.is_some() { ln_abs(b) } else { 0.0 })
            .collect();
        let lx = ln_abs(x);
        let dot = |e: &[i64]| e.iter().zip(&logs).map(|(k, l)| *k as f64 * l).sum::<f64>();
        let mut candidates: Vec<(f64, Vec<i64>)> = Vec::new();
        let mut consider = |e: Vec<i64>| {
            if e.iter().all(|k| k.abs() <= EXPONENT_BOUND) {
                candidates.push(((dot(&e) - lx).abs(), e));
            }
        };
        let combine = |t: &[i64]| -> Vec<i64> {
            let mut e = e0.clone();
            for (k, ti) in kernel.iter().zip(t) {
                for (ej, kj) in e.iter_mut().zip(k) {
                    *ej += ti * kj;
                }
            }
            e
        };
        let range = -EXPONENT_BOUND..=EXPONENT_BOUND;
        match kernel.len() {
            0 => consider(e0.clone()),
            1 => {
                let slope = dot(&kernel[0]);
                if slope.abs() > 1e-9 {
                    let t = libm::round((lx - dot(&e0)) / slope) as i64;
                    for dt in -1..=1 {
                        consider(combine(&[t + dt]));
                    }
                } else {
                    for t in range {
                        consider(combine(&[t]));
                    }
                }
            }
            2 => {
                for t1 in range.clone() {
                    for t2 in range.clone() {
                        consider(combine(&[t1, t2]));
                    }
                }
            }
            _ => return Err(not_factorable(x)),
        }
        candidates.sort_by(|a, b| {
            a.0.partial_cmp(&b.0)
                .unwrap_or(core::cmp::Ordering::Equal)
                .then_with(|| a.1.cmp(&b.1))
        });
        let ax = x.abs();
        for (_, mut e) in candidates.into_iter().take(8) {
            let mut prod = TowerElement::one();
            for (b, k) in basis.iter().zip(&e) {
                if *k != 0 {
                    prod = prod.try_mul(&b.abs().try_pow(*k)?)?;
                }
            }
            if prod == ax {
                for (b, k) in basis.iter().zip(e.iter_mut()) {
                    if b.abs() == one {
                        *k = 0;
                    }
                }
                settle_sign(x, basis, &mut e)?;
                return Ok(e);
            }
        }
        Err(not_factorable(x))
    }
}

fn ln_abs(x: &TowerElement) -> f64 {
    match x.as_rational() {
        Some(q) => ln_rational(q),
        None => libm::log(x.approx_f64().abs()),
    }
}

fn ln_rational(q: &Rational) -> f64 {
    // log of numerator and denominator separately to survive huge values
    let ln_big = |n: &BigInt| -> f64 {
        let bits = n.bits();
        if bits < 1000 {
            libm::log(rational_to_f64(&Rational::from_integer(n.abs())))
        } else {
            let shift = bits - 64;
            libm::log((n.abs() >> shift).to_f64().unwrap_or(1.0))
                + shift as f64 * core::f64::consts::LN_2
        }
    };
    ln_big(q.numer()) - ln_big(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::TowerContext;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn rational_prime_basis() {
        let basis = MultiplicativeBasis::primes_covering(&[q(12, 5), q(-7, 1)]);
        assert_eq!(
            basis.elements(),
            &[q(-1, 1), q(2, 1), q(3, 1), q(5, 1), q(7, 1)]
        );
        assert_eq!(
            basis.factor(&q(-12, 5)).unwrap(),
            alloc::vec![1, 2, 1, -1, 0]
        );
        assert!(basis.factor(&q(11, 1)).is_err());
    }

    #[test]
    fn rational_non_prime_basis() {
        let basis = MultiplicativeBasis::new(alloc::vec![q(-1, 1), q(6, 1), q(2, 1)]).unwrap();
        assert_eq!(basis.factor(&q(-3, 1)).unwrap(), alloc::vec![1, 1, -1]);
        assert!(basis.factor(&q(5, 1)).is_err());
    }

    #[test]
    fn coprime_base_refines() {
        let n = |k: u64| BigUint::from(k);
        assert_eq!(coprime_base(&[n(12), n(18)]), alloc::vec![n(2), n(3)]);
        assert_eq!(coprime_base(&[n(6), n(35), n(1)]), alloc::vec![n(6), n(35)]);
    }

    #[test]
    fn tower_factorization_with_roots() {
        let (r2, ctx) = TowerElement::from_i64(2)
            .sqrt_positive(&TowerContext::root())
            .unwrap();
        let (r3, _) = TowerElement::from_i64(3).sqrt_positive(&ctx).unwrap();
        let basis = MultiplicativeBasis::new(alloc::vec![
            TowerElement::from_i64(-1),
            r2.clone(),
            r3.clone()
        ])
        .unwrap();
        let x = TowerElement::from_i64(-12).try_div(&r3).unwrap(); // -(√2)^4 (√3)
        assert_eq!(basis.factor(&x).unwrap(), alloc::vec![1, 4, 1]);
    }

    #[test]
    fn tower_factorization_with_units() {
        let (r2, _) = TowerElement::from_i64(2)
            .sqrt_positive(&TowerContext::root())
            .unwrap();
        let unit = TowerElement::one().try_add(&r2).unwrap();
        let basis = MultiplicativeBasis::new(alloc::vec![
            TowerElement::from_i64(-1),
            unit.clone(),
            TowerElement::from_i64(3)
        ])
        .unwrap();
        let x = unit
            .try_pow(-5)
            .unwrap()
            .try_mul(&TowerElement::from_i64(9))
            .unwrap();
        assert_eq!(basis.factor(&x).unwrap(), alloc::vec![0, -5, 2]);
        assert!(basis.factor(&TowerElement::from_i64(7)).is_err());
    }
}
