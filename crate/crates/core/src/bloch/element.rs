use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldError};
use crate::square_algebra::GroupRingElement;

/// An element of the free `R_F`-module on symbols `[x]`, `x ∈ F^×`, with `[1] = 0`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RPElement<F: Field> {
    terms: BTreeMap<F, GroupRingElement<F::Class>>,
}

/// An element of the free abelian group on symbols `[x]`, `x ∈ F^× ∖ {1}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PElement<F: Field> {
    terms: BTreeMap<F, BigInt>,
}

fn check_generator<F: Field>(x: &F) -> Result<()> {
    if x.is_zero() {
        Err(Error::Field(FieldError::ZeroClass))
    } else {
        Ok(())
    }
}

impl<F: Field> Default for RPElement<F> {
    fn default() -> Self {
        RPElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Field> RPElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The symbol `[x]`; `[1]` is zero.
    pub fn generator(x: F) -> Result<Self> {
        Self::term(GroupRingElement::one(), x)
    }

    /// `r·[x]`.
    pub fn term(r: GroupRingElement<F::Class>, x: F) -> Result<Self> {
        let mut out = Self::zero();
        out.add_term(r, x)?;
        Ok(out)
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (F, GroupRingElement<F::Class>)>,
    ) -> Result<Self> {
        let mut out = Self::zero();
        for (x, r) in terms {
            out.add_term(r, x)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, r: GroupRingElement<F::Class>, x: F) -> Result<()> {
        check_generator(&x)?;
        if x.is_one() || r.is_zero() {
            return Ok(());
        }
        self.add_unchecked(r, x);
        Ok(())
    }

    fn add_unchecked(&mut self, r: GroupRingElement<F::Class>, x: F) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            Entry::Occupied(mut e) => {
                let sum = e.get() + &r;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
            Entry::Vacant(e) => {
                e.insert(r);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&F, &GroupRingElement<F::Class>)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &F> {
        self.terms.keys()
    }

    pub fn coefficient(&self, x: &F) -> GroupRingElement<F::Class> {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Module action of `r ∈ R_F`.
    pub fn scale(&self, r: &GroupRingElement<F::Class>) -> Self {
        let mut out = Self::zero();
        for (x, c) in self.terms.iter() {
            out.add_unchecked(r * c, x.clone());
        }
        out
    }

    /// Action of the class `⟨c⟩`.
    pub fn shift(&self, c: &F::Class) -> Self {
        RPElement {
            terms: self
                .terms
                .iter()
                .map(|(x, r)| (x.clone(), r.shift(c)))
                .collect(),
        }
    }

    pub fn scale_int(&self, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero();
        }
        RPElement {
            terms: self
                .terms
                .iter()
                .map(|(x, r)| (x.clone(), r.scale(n)))
                .collect(),
        }
    }
}

impl<F: Field> Add for &RPElement<F> {
    type Output = RPElement<F>;
    fn add(self, rhs: Self) -> RPElement<F> {
        let mut out = self.clone();
        for (x, r) in rhs.terms.iter() {
            out.add_unchecked(r.clone(), x.clone());
        }
        out
    }
}

impl<F: Field> Neg for &RPElement<F> {
    type Output = RPElement<F>;
    fn neg(self) -> RPElement<F> {
        RPElement {
            terms: self.terms.iter().map(|(x, r)| (x.clone(), -r)).collect(),
        }
    }
}

impl<F: Field> Sub for &RPElement<F> {
    type Output = RPElement<F>;
    fn sub(self, rhs: Self) -> RPElement<F> {
        self + &(-rhs)
    }
}

impl<F: Field> Add for RPElement<F> {
    type Output = RPElement<F>;
    fn add(self, rhs: Self) -> RPElement<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for RPElement<F> {
    type Output = RPElement<F>;
    fn sub(self, rhs: Self) -> RPElement<F> {
        &self - &rhs
    }
}

impl<F: Field> Neg for RPElement<F> {
    type Output = RPElement<F>;
    fn neg(self) -> RPElement<F> {
        -&self
    }
}

fn write_coefficient<C: crate::field::SquareClass>(
    f: &mut fmt::Formatter<'_>,
    r: &GroupRingElement<C>,
    first: bool,
) -> fmt::Result {
    let mut terms = r.terms();
    if let (Some((c, v)), None) = (terms.next(), terms.next()) {
        let neg = v.is_negative();
        f.write_str(match (first, neg) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        })?;
        if !v.abs().is_one() {
            write!(f, "{}", v.abs())?;
        }
        if !c.is_identity() || v.abs().is_one() {
            write!(f, "{}", c)?;
        }
        return Ok(());
    }
    if !first {
        f.write_str(" + ")?;
    }
    write!(f, "({})", r)
}

impl<F: Field> fmt::Display for RPElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (x, r)) in self.terms.iter().enumerate() {
            write_coefficient(f, r, i == 0)?;
            write!(f, "[{}]", x)?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for RPElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RPElement({})", self)
    }
}

impl<F: Field> Default for PElement<F> {
    fn default() -> Self {
        PElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Field> PElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(x: F) -> Result<Self> {
        Self::from_terms([(x, BigInt::one())])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (F, BigInt)>) -> Result<Self> {
        let mut out = Self::zero();
        for (x, n) in terms {
            check_generator(&x)?;
            if !x.is_one() {
                out.add_unchecked(n, x);
            }
        }
        Ok(out)
    }

    fn add_unchecked(&mut self, n: BigInt, x: F) {
        if n.is_zero() {
            return;
        }
        match self.terms.entry(x) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += n;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(n);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&F, &BigInt)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &F> {
        self.terms.keys()
    }

    pub fn coefficient(&self, x: &F) -> BigInt {
        self.terms.get(x).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Field> Add for &PElement<F> {
    type Output = PElement<F>;
    fn add(self, rhs: Self) -> PElement<F> {
        let mut out = self.clone();
        for (x, n) in rhs.terms.iter() {
            out.add_unchecked(n.clone(), x.clone());
        }
        out
    }
}

impl<F: Field> Neg for &PElement<F> {
    type Output = PElement<F>;
    fn neg(self) -> PElement<F> {
        PElement {
            terms: self.terms.iter().map(|(x, n)| (x.clone(), -n)).collect(),
        }
    }
}

impl<F: Field> Sub for &PElement<F> {
    type Output = PElement<F>;
    fn sub(self, rhs: Self) -> PElement<F> {
        self + &(-rhs)
    }
}

impl<F: Field> fmt::Display for PElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (x, n)) in self.terms.iter().enumerate() {
            let neg = n.is_negative();
            f.write_str(match (i == 0, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            })?;
            if !n.abs().is_one() {
                write!(f, "{}", n.abs())?;
            }
            write!(f, "[{}]", x)?;
        }
        Ok(())
    }
}

impl<F: Field> fmt::Debug for PElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PElement({})", self)
    }
}

/// `P(F) = RP(F)_{F^×}`: apply the augmentation to every coefficient.
pub fn coinvariants<F: Field>(e: &RPElement<F>) -> PElement<F> {
    let mut out = PElement::zero();
    for (x, r) in e.terms() {
        out.add_unchecked(r.epsilon(), x.clone());
    }
    out
}
