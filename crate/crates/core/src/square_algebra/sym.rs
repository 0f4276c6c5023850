use alloc::collections::{BTreeMap, BTreeSet};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::basis::{Factorize, MultiplicativeBasis};
use crate::error::Result;
use crate::field::{Field, TowerContext, TowerElement};

/// An element of `S²_Z(A)` for `A` free on a basis.
///
/// Off-diagonal coordinates `(i, j)`, `i < j`, are integers with
/// `e_j∘e_i = −e_i∘e_j`; the diagonal `e_i∘e_i` has order two, so only its
/// parity is stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct SymSquareElement {
    off_diagonal: BTreeMap<(usize, usize), BigInt>,
    diagonal: BTreeSet<usize>,
}

/// An element of `∧²_Z(A)` for `A` free on a basis: coordinates on `e_i∧e_j`, `i < j`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct WedgeElement {
    terms: BTreeMap<(usize, usize), BigInt>,
}

fn accumulate(map: &mut BTreeMap<(usize, usize), BigInt>, key: (usize, usize), v: BigInt) {
    if v.is_zero() {
        return;
    }
    let e = map.entry(key).or_insert_with(BigInt::zero);
    *e += v;
    if e.is_zero() {
        map.remove(&key);
    }
}

fn off_diagonal_of(a: &[i64], b: &[i64]) -> BTreeMap<(usize, usize), BigInt> {
    let mut out = BTreeMap::new();
    for i in 0..a.len() {
        for j in (i + 1)..a.len() {
            let v = BigInt::from(a[i]) * b[j] - BigInt::from(a[j]) * b[i];
            accumulate(&mut out, (i, j), v);
        }
    }
    out
}

impl SymSquareElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `x∘y` from exponent vectors over a common basis.
    pub fn from_exponents(a: &[i64], b: &[i64]) -> Self {
        let diagonal = (0..a.len())
            .filter(|&i| (a[i] * b[i]).rem_euclid(2) == 1)
            .collect();
        SymSquareElement {
            off_diagonal: off_diagonal_of(a, b),
            diagonal,
        }
    }

    pub fn from_parts(
        off: impl IntoIterator<Item = ((usize, usize), BigInt)>,
        diagonal: impl IntoIterator<Item = usize>,
    ) -> Self {
        let mut out = SymSquareElement::zero();
        for ((i, j), v) in off {
            match i.cmp(&j) {
                core::cmp::Ordering::Less => accumulate(&mut out.off_diagonal, (i, j), v),
                core::cmp::Ordering::Greater => accumulate(&mut out.off_diagonal, (j, i), -v),
                core::cmp::Ordering::Equal => {
                    if v.is_odd() {
                        out.toggle_diagonal(i);
                    }
                }
            }
        }
        for i in diagonal {
            out.toggle_diagonal(i);
        }
        out
    }

    fn toggle_diagonal(&mut self, i: usize) {
        if !self.diagonal.remove(&i) {
            self.diagonal.insert(i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.off_diagonal.is_empty() && self.diagonal.is_empty()
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (&(usize, usize), &BigInt)> {
        self.off_diagonal.iter()
    }

    pub fn diagonal(&self) -> impl Iterator<Item = &usize> {
        self.diagonal.iter()
    }

    /// `(i, j, coefficient)` triples; diagonal entries carry coefficient 1.
    pub fn entries(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out: Vec<(usize, usize, BigInt)> = self
            .off_diagonal
            .iter()
            .map(|(&(i, j), v)| (i, j, v.clone()))
            .collect();
        out.extend(self.diagonal.iter().map(|&i| (i, i, BigInt::from(1))));
        out.sort();
        out
    }

    /// Reduce mod the relations `2(e_k∘e_j) = 0` that hold when `e_k` has order two.
    pub fn reduce_torsion(&self, k: usize) -> Self {
        let two = BigInt::from(2);
        SymSquareElement {
            off_diagonal: self
                .off_diagonal
                .iter()
                .map(|(&(i, j), v)| {
                    (
                        (i, j),
                        if i == k || j == k {
                            v.mod_floor(&two)
                        } else {
                            v.clone()
                        },
                    )
                })
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            diagonal: self.diagonal.clone(),
        }
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        SymSquareElement {
            off_diagonal: self
                .off_diagonal
                .iter()
                .map(|(k, v)| (*k, v * n))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            diagonal: if n.is_odd() {
                self.diagonal.clone()
            } else {
                BTreeSet::new()
            },
        }
    }
}

impl Add for &SymSquareElement {
    type Output = SymSquareElement;
    fn add(self, rhs: Self) -> SymSquareElement {
        let mut out = self.clone();
        for (k, v) in rhs.off_diagonal.iter() {
            accumulate(&mut out.off_diagonal, *k, v.clone());
        }
        for &i in rhs.diagonal.iter() {
            out.toggle_diagonal(i);
        }
        out
    }
}

impl Neg for &SymSquareElement {
    type Output = SymSquareElement;
    fn neg(self) -> SymSquareElement {
        SymSquareElement {
            off_diagonal: self.off_diagonal.iter().map(|(k, v)| (*k, -v)).collect(),
            diagonal: self.diagonal.clone(),
        }
    }
}

impl Sub for &SymSquareElement {
    type Output = SymSquareElement;
    fn sub(self, rhs: Self) -> SymSquareElement {
        self + &(-rhs)
    }
}

impl WedgeElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `x∧y` from exponent vectors over a common basis.
    pub fn from_exponents(a: &[i64], b: &[i64]) -> Self {
        WedgeElement {
            terms: off_diagonal_of(a, b),
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), BigInt)>) -> Self {
        let mut out = WedgeElement::zero();
        for ((i, j), v) in terms {
            match i.cmp(&j) {
                core::cmp::Ordering::Less => accumulate(&mut out.terms, (i, j), v),
                core::cmp::Ordering::Greater => accumulate(&mut out.terms, (j, i), -v),
                core::cmp::Ordering::Equal => {}
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn entries(&self) -> Vec<(usize, usize, BigInt)> {
        self.terms
            .iter()
            .map(|(&(i, j), v)| (i, j, v.clone()))
            .collect()
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        WedgeElement {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v * n))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
        }
    }
}

impl Add for &WedgeElement {
    type Output = WedgeElement;
    fn add(self, rhs: Self) -> WedgeElement {
        let mut out = self.clone();
        for (k, v) in rhs.terms.iter() {
            accumulate(&mut out.terms, *k, v.clone());
        }
        out
    }
}

impl Neg for &WedgeElement {
    type Output = WedgeElement;
    fn neg(self) -> WedgeElement {
        WedgeElement {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Sub for &WedgeElement {
    type Output = WedgeElement;
    fn sub(self, rhs: Self) -> WedgeElement {
        self + &(-rhs)
    }
}

/// Bilinear expansion of `x∘y` over `basis`, reduced at `−1` when it is a basis element.
pub fn expand_sym<F: Factorize>(
    x: &F,
    y: &F,
    basis: &MultiplicativeBasis<F>,
) -> Result<SymSquareElement> {
    let s = SymSquareElement::from_exponents(&basis.factor(x)?, &basis.factor(y)?);
    Ok(reduce_at_minus_one(&s, basis))
}

/// Apply [`SymSquareElement::reduce_torsion`] at the index of `−1`, if present.
pub fn reduce_at_minus_one<F: Field>(
    s: &SymSquareElement,
    basis: &MultiplicativeBasis<F>,
) -> SymSquareElement {
    match basis.index_of(&F::from_i64(-1)) {
        Some(k) => s.reduce_torsion(k),
        None => s.clone(),
    }
}

/// Bilinear expansion of `x∧y` over `basis`.
pub fn expand_wedge<F: Factorize>(
    x: &F,
    y: &F,
    basis: &MultiplicativeBasis<F>,
) -> Result<WedgeElement> {
    Ok(WedgeElement::from_exponents(
        &basis.factor(x)?,
        &basis.factor(y)?,
    ))
}

/// A half of `x∧y` over `−1` and independent positive roots.
#[derive(Clone, Debug)]
pub struct HalvedWedge {
    pub basis: MultiplicativeBasis<TowerElement>,
    pub half: WedgeElement,
    pub context: Arc<TowerContext>,
}

/// `w` with `2w = x∧y` in `∧²(R^×)`.
///
/// Writing `x = s·∏g_i^{2α_i}`, `y = t·∏g_j^{2β_j}` with `s, t = ±1`, `g > 0`
/// independent, and using `(−1)∧(−1) = 0`, the half is
/// `Σβ_j s∧g_j + Σα_i g_i∧t + 2Σα_iβ_j g_i∧g_j`.
pub fn halve_wedge(
    x: &TowerElement,
    y: &TowerElement,
    ctx: &Arc<TowerContext>,
) -> Result<HalvedWedge> {
    let (roots, ex, ey, ctx) = match (x.as_rational(), y.as_rational()) {
        (Some(p), Some(q)) => rational_roots(p, q, ctx)?,
        _ => tower_roots(x, y, ctx)?,
    };
    let mut basis = MultiplicativeBasis::new(alloc::vec![TowerElement::from_i64(-1)])?;
    let idx: Vec<usize> = roots.into_iter().map(|r| basis.insert(r)).collect();
    let mut terms: Vec<((usize, usize), BigInt)> = Vec::new();
    for (m, &i) in idx.iter().enumerate() {
        if x.is_negative() {
            terms.push(((0, i), BigInt::from(ey[m])));
        }
        if y.is_negative() {
            terms.push(((i, 0), BigInt::from(ex[m])));
        }
        for (n, &j) in idx.iter().enumerate() {
            terms.push(((i, j), BigInt::from(2 * ex[m] * ey[n])));
        }
    }
    Ok(HalvedWedge {
        basis,
        half: WedgeElement::from_terms(terms),
        context: ctx,
    })
}

type Roots = (Vec<TowerElement>, Vec<i64>, Vec<i64>, Arc<TowerContext>);

/// `√q` over a coprime base of `|x|, |y|`, which keeps the roots independent.
fn rational_roots(
    x: &crate::field::Rational,
    y: &crate::field::Rational,
    ctx: &Arc<TowerContext>,
) -> Result<Roots> {
    let parts = [
        x.numer().magnitude(),
        x.denom().magnitude(),
        y.numer().magnitude(),
        y.denom().magnitude(),
    ];
    let base = super::basis::coprime_base(&parts.iter().map(|n| (*n).clone()).collect::<Vec<_>>());
    let valuation = |n: &num_bigint::BigUint, q: &num_bigint::BigUint| {
        let mut n = n.clone();
        let mut k = 0i64;
        while n.is_multiple_of(q) {
            n /= q;
            k += 1;
        }
        k
    };
    let mut ctx = ctx.clone();
    let mut roots = Vec::new();
    let (mut ex, mut ey) = (Vec::new(), Vec::new());
    for q in &base {
        let (r, grown) = TowerElement::from_rational(crate::field::Rational::from_integer(
            BigInt::from(q.clone()),
        ))
        .sqrt_positive(&ctx)?;
        ctx = grown;
        roots.push(r);
        ex.push(valuation(parts[0], q) - valuation(parts[1], q));
        ey.push(valuation(parts[2], q) - valuation(parts[3], q));
    }
    Ok((roots, ex, ey, ctx))
}

/// `a = √|x|`, `b = √|y|`, merged when one is an integer power of the other.
fn tower_roots(x: &TowerElement, y: &TowerElement, ctx: &Arc<TowerContext>) -> Result<Roots> {
    let (a, ctx) = x.abs().sqrt_positive(ctx)?;
    let (b, ctx) = y.abs().sqrt_positive(&ctx)?;
    let one = TowerElement::one();
    Ok(match (a == one, b == one) {
        (true, true) => (Vec::new(), Vec::new(), Vec::new(), ctx),
        (true, false) => (alloc::vec![b], alloc::vec![0], alloc::vec![1], ctx),
        (false, true) => (alloc::vec![a], alloc::vec![1], alloc::vec![0], ctx),
        (false, false) => {
            if let Ok(k) = TowerElement::factor_over(&b, core::slice::from_ref(&a)) {
                (alloc::vec![a], alloc::vec![1], k, ctx)
            } else if let Ok(k) = TowerElement::factor_over(&a, core::slice::from_ref(&b)) {
                (alloc::vec![b], k, alloc::vec![1], ctx)
            } else {
                (alloc::vec![a, b], alloc::vec![1, 0], alloc::vec![0, 1], ctx)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn t(n: i64) -> TowerElement {
        TowerElement::from_i64(n)
    }

    #[test]
    fn sym_of_inverse_is_minus_diagonal() {
        let basis = MultiplicativeBasis::primes_covering(&[q(6)]);
        let s = expand_sym(&q(6), &q(1).try_div(&q(6)).unwrap(), &basis).unwrap();
        let d = expand_sym(&q(6), &q(6), &basis).unwrap();
        assert_eq!(s, -&d);
        assert!(!s.is_zero());
        assert!((&s + &s).is_zero());
    }

    #[test]
    fn sym_identity_and_antisymmetry() {
        let basis = MultiplicativeBasis::primes_covering(&[q(6)]);
        assert!(expand_sym(&q(1), &q(3), &basis).unwrap().is_zero());
        let s =
            &expand_sym(&q(2), &q(3), &basis).unwrap() + &expand_sym(&q(3), &q(2), &basis).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn diagonal_has_order_two() {
        let basis = MultiplicativeBasis::primes_covering(&[q(2)]);
        let d = expand_sym(&q(2), &q(2), &basis).unwrap();
        assert!(!d.is_zero());
        assert!((&d + &d).is_zero());
        // 4∘2 = 2(2∘2) = 0
        assert!(expand_sym(&q(4), &q(2), &basis).unwrap().is_zero());
    }

    #[test]
    fn halve_four_nine() {
        let h = halve_wedge(&t(4), &t(9), &TowerContext::root()).unwrap();
        assert_eq!(h.basis.elements(), &[t(-1), t(2), t(3)]);
        assert_eq!(h.half.entries(), alloc::vec![(1, 2, BigInt::from(2))]);
        let full = expand_wedge(&t(4), &t(9), &h.basis).unwrap();
        assert_eq!(h.half.scale(&BigInt::from(2)), full);
    }

    #[test]
    fn halve_degenerate_pairs() {
        for (x, y) in [(5, 5), (-1, -1), (-3, -3), (1, 7)] {
            let h = halve_wedge(&t(x), &t(y), &TowerContext::root()).unwrap();
            assert!(h.half.is_zero(), "({}, {})", x, y);
        }
    }

    #[test]
    fn halve_mixed_signs() {
        let h = halve_wedge(&t(-2), &t(3), &TowerContext::root()).unwrap();
        let full = expand_wedge(&t(-2), &t(3), &h.basis).unwrap();
        assert_eq!(h.half.scale(&BigInt::from(2)), full);
    }
}
