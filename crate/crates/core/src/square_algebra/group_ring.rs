use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, SquareClass};
use crate::linalg::{solve_integer, SparseVec};

/// An element of the integral group ring `Z[F^×/(F^×)²]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupRingElement<C: SquareClass> {
    terms: BTreeMap<C, BigInt>,
}

impl<C: SquareClass> Default for GroupRingElement<C> {
    fn default() -> Self {
        GroupRingElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<C: SquareClass> GroupRingElement<C> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_class(C::identity())
    }

    /// The basis element `⟨c⟩`.
    pub fn from_class(c: C) -> Self {
        Self::from_terms([(c, BigInt::one())])
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Self::from_terms([(C::identity(), n.into())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (C, BigInt)>) -> Self {
        let mut out = Self::default();
        for (c, n) in terms {
            out.add_term(c, &n);
        }
        out
    }

    fn add_term(&mut self, c: C, n: &BigInt) {
        if n.is_zero() {
            return;
        }
        match self.terms.entry(c) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += n;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(n.clone());
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&C, &BigInt)> {
        self.terms.iter()
    }

    pub fn classes(&self) -> impl Iterator<Item = &C> {
        self.terms.keys()
    }

    pub fn coefficient(&self, c: &C) -> BigInt {
        self.terms.get(c).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Augmentation `ε`: the sum of the coefficients.
    pub fn epsilon(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |acc, v| acc + v)
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        GroupRingElement {
            terms: self.terms.iter().map(|(c, v)| (c.clone(), v * n)).collect(),
        }
    }

    /// Multiply by the basis element `⟨c⟩`.
    pub fn shift(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(k, v)| (k.product(c), v.clone())))
    }
}

impl<C: SquareClass> Add for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn add(self, rhs: Self) -> GroupRingElement<C> {
        let mut out = self.clone();
        for (c, v) in rhs.terms.iter() {
            out.add_term(c.clone(), v);
        }
        out
    }
}

impl<C: SquareClass> Sub for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn sub(self, rhs: Self) -> GroupRingElement<C> {
        self + &(-rhs)
    }
}

impl<C: SquareClass> Neg for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn neg(self) -> GroupRingElement<C> {
        GroupRingElement {
            terms: self.terms.iter().map(|(c, v)| (c.clone(), -v)).collect(),
        }
    }
}

impl<C: SquareClass> Mul for &GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn mul(self, rhs: Self) -> GroupRingElement<C> {
        let mut out = GroupRingElement::zero();
        for (a, x) in self.terms.iter() {
            for (b, y) in rhs.terms.iter() {
                out.add_term(a.product(b), &(x * y));
            }
        }
        out
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl<C: SquareClass> $tr for GroupRingElement<C> {
            type Output = GroupRingElement<C>;
            fn $m(self, rhs: Self) -> GroupRingElement<C> {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl<C: SquareClass> Neg for GroupRingElement<C> {
    type Output = GroupRingElement<C>;
    fn neg(self) -> GroupRingElement<C> {
        -&self
    }
}

impl<C: SquareClass> fmt::Debug for GroupRingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement({})", self)
    }
}

impl<C: SquareClass> fmt::Display for GroupRingElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, v)) in self.terms.iter().enumerate() {
            let neg = v.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = v.abs();
            if !mag.is_one() {
                write!(f, "{}", mag)?;
            }
            write!(f, "{}", c)?;
        }
        Ok(())
    }
}

/// An element of the augmentation ideal `I_F` (coefficients summing to zero).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AugmentationIdealElement<C: SquareClass>(GroupRingElement<C>);

impl<C: SquareClass> AugmentationIdealElement<C> {
    pub fn new(r: GroupRingElement<C>) -> Result<Self> {
        if r.epsilon().is_zero() {
            Ok(AugmentationIdealElement(r))
        } else {
            Err(Error::InvalidArgument(alloc::format!(
                "{} has nonzero augmentation",
                r
            )))
        }
    }

    pub fn zero() -> Self {
        AugmentationIdealElement(GroupRingElement::zero())
    }

    pub fn as_ring(&self) -> &GroupRingElement<C> {
        &self.0
    }

    pub fn into_ring(self) -> GroupRingElement<C> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl<C: SquareClass> fmt::Display for AugmentationIdealElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `⟨⟨x⟩⟩ = ⟨x⟩ − 1`.
pub fn bracket<F: Field>(x: &F) -> Result<AugmentationIdealElement<F::Class>> {
    Ok(bracket_class(&x.square_class()?))
}

pub fn bracket_class<C: SquareClass>(c: &C) -> AugmentationIdealElement<C> {
    AugmentationIdealElement(&GroupRingElement::from_class(c.clone()) - &GroupRingElement::one())
}

/// Subgroup of the square-class group generated by `gens`, identity first.
pub fn generated_subgroup<C: SquareClass>(
    gens: impl IntoIterator<Item = C>,
    cap: usize,
) -> Result<Vec<C>> {
    let mut group: Vec<C> = alloc::vec![C::identity()];
    for g in gens {
        if group.contains(&g) {
            continue;
        }
        let shifted: Vec<C> = group.iter().map(|h| h.product(&g)).collect();
        group.extend(shifted);
        if group.len() > cap {
            return Err(Error::TooLarge {
                columns: group.len(),
                bound: cap,
            });
        }
    }
    Ok(group)
}

/// Coefficients `n_{a,b}` with `r = Σ n_{a,b} ⟨⟨a⟩⟩⟨⟨b⟩⟩`, searched over the
/// subgroup generated by the classes of `r`. `None` means `r ∉ I_F²`
/// (within that subgroup, which is where any witness must live).
pub fn augmentation_square_witness<C: SquareClass>(
    r: &GroupRingElement<C>,
) -> Result<Option<Vec<(C, C, BigInt)>>> {
    if r.is_zero() {
        return Ok(Some(Vec::new()));
    }
    if !r.epsilon().is_zero() {
        return Ok(None);
    }
    let group = generated_subgroup(r.classes().cloned(), 1 << 10)?;
    let index = |c: &C| group.iter().position(|g| g == c).expect("closed subgroup");
    let mut columns: Vec<SparseVec> = Vec::new();
    let mut labels: Vec<(C, C)> = Vec::new();
    for (i, a) in group.iter().enumerate().skip(1) {
        for b in group.iter().skip(i) {
            let prod = bracket_class(a).into_ring() * bracket_class(b).into_ring();
            columns.push(prod.terms().map(|(c, v)| (index(c), v.clone())).collect());
            labels.push((a.clone(), b.clone()));
        }
    }
    let target: SparseVec = r.terms().map(|(c, v)| (index(c), v.clone())).collect();
    Ok(solve_integer(&columns, &target, false).map(|sol| {
        labels
            .into_iter()
            .zip(sol.particular)
            .filter(|(_, n)| !n.is_zero())
            .map(|((a, b), n)| (a, b, n))
            .collect()
    }))
}

pub fn in_augmentation_square<C: SquareClass>(r: &GroupRingElement<C>) -> Result<bool> {
    Ok(augmentation_square_witness(r)?.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{QClass, Rational, TowerClass, TowerElement};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn epsilon_examples() {
        let b = bracket(&q(5)).unwrap();
        assert!(b.as_ring().epsilon().is_zero());
        assert_eq!(
            GroupRingElement::<QClass>::integer(3).epsilon(),
            BigInt::from(3)
        );
        let prod = b.as_ring() * bracket(&q(7)).unwrap().as_ring();
        assert!(prod.epsilon().is_zero());
    }

    #[test]
    fn bracket_of_square_vanishes() {
        assert!(bracket(&q(9)).unwrap().is_zero());
        let minus = bracket(&TowerElement::from_i64(-1)).unwrap();
        let want = &GroupRingElement::from_class(TowerClass::negative()) - &GroupRingElement::one();
        assert_eq!(minus.as_ring(), &want);
        assert!(bracket(&q(0)).is_err());
    }

    #[test]
    fn bracket_squared_is_minus_two_bracket() {
        let b = bracket(&q(6)).unwrap().into_ring();
        assert_eq!(&b * &b, b.scale(&BigInt::from(-2)));
    }

    #[test]
    fn bracket_of_product() {
        let (x, y) = (q(6), q(-10));
        let bx = bracket(&x).unwrap().into_ring();
        let by = bracket(&y).unwrap().into_ring();
        let bxy = bracket(&(&x * &y)).unwrap().into_ring();
        assert_eq!(bxy, &(&bx + &by) + &(&bx * &by));
    }

    #[test]
    fn augmentation_square_in_tower_is_even_multiples() {
        let b = bracket_class(&TowerClass::negative()).into_ring();
        assert!(in_augmentation_square(&b.scale(&BigInt::from(2))).unwrap());
        assert!(in_augmentation_square(&b.scale(&BigInt::from(-4))).unwrap());
        assert!(!in_augmentation_square(&b).unwrap());
    }

    #[test]
    fn augmentation_square_over_rationals() {
        let b2 = bracket(&q(2)).unwrap().into_ring();
        let b3 = bracket(&q(3)).unwrap().into_ring();
        assert!(in_augmentation_square(&(&b2 * &b3)).unwrap());
        assert!(!in_augmentation_square(&b2).unwrap());
        assert!(!in_augmentation_square(&GroupRingElement::<QClass>::one()).unwrap());
    }

    #[test]
    fn display_shape() {
        let r = GroupRingElement::from_terms([
            (q(-1).square_class().unwrap(), BigInt::from(1)),
            (q(2).square_class().unwrap(), BigInt::from(-3)),
            (QClass::identity(), BigInt::from(-1)),
        ]);
        assert_eq!(alloc::format!("{}", r), "-<1> - 3<2> + <-1>");
    }
}
