use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::projective::{moebius_apply, ProjPoint, SL2Matrix};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::square_algebra::GroupRingElement;

/// Sign `s` with `induced_d1([z]) = s·λ₁([z])` on `R_F[Z_1]`.
pub const INDUCED_D1_SIGN: i64 = -1;

/// Ordered tuple of pairwise distinct points of `ℙ¹(F)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ConfigTuple<F> {
    points: Vec<ProjPoint<F>>,
}

impl<F: Field> ConfigTuple<F> {
    pub fn new(points: Vec<ProjPoint<F>>) -> Result<Self> {
        for (i, p) in points.iter().enumerate() {
            if points[..i].contains(p) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "point {p} repeated in configuration"
                )));
            }
        }
        Ok(ConfigTuple { points })
    }

    pub fn points(&self) -> &[ProjPoint<F>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Diagonal action of `g`.
    pub fn act(&self, g: &SL2Matrix<F>) -> Result<Self> {
        Ok(ConfigTuple {
            points: self
                .points
                .iter()
                .map(|p| moebius_apply(g, p))
                .collect::<Result<_>>()?,
        })
    }

    /// The tuple with entry `i` removed.
    pub fn face(&self, i: usize) -> Self {
        let mut points = self.points.clone();
        points.remove(i);
        ConfigTuple { points }
    }
}

impl<F: fmt::Display> fmt::Display for ConfigTuple<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Ordered tuple `[z₁, …, z_n]` of distinct elements of `F^× ∖ {1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ZTuple<F> {
    entries: Vec<F>,
}

impl<F: Field> ZTuple<F> {
    pub fn new(entries: Vec<F>) -> Result<Self> {
        for (i, z) in entries.iter().enumerate() {
            if z.is_zero() || z.is_one() {
                return Err(Error::InvalidArgument(alloc::format!(
                    "tuple entry {z} must avoid 0 and 1"
                )));
            }
            if entries[..i].contains(z) {
                return Err(Error::InvalidArgument(alloc::format!(
                    "tuple entry {z} repeated"
                )));
            }
        }
        Ok(ZTuple { entries })
    }

    pub fn empty() -> Self {
        ZTuple {
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `(0, ∞, 1, z₁, …, z_n)`.
    pub fn representative(&self) -> ConfigTuple<F> {
        let mut points = alloc::vec![
            ProjPoint::Finite(F::zero()),
            ProjPoint::Infinity,
            ProjPoint::Finite(F::one())
        ];
        points.extend(self.entries.iter().cloned().map(ProjPoint::Finite));
        ConfigTuple { points }
    }
}

impl<F: fmt::Display> fmt::Display for ZTuple<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, z) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{z}")?;
        }
        f.write_str("]")
    }
}

/// `(x, y, z)` in general position goes to `(0, ∞, φ)` under a witness of `(x, y)`:
/// `(z−x)(x−y)/(z−y)`, with the branches `1/(y−z)`, `z−x`, `x−y` at infinity.
pub fn phi<F: Field>(x: &ProjPoint<F>, y: &ProjPoint<F>, z: &ProjPoint<F>) -> Result<F> {
    if x == y || y == z || x == z {
        return Err(Error::InvalidArgument(alloc::format!(
            "phi needs distinct points, got ({x}, {y}, {z})"
        )));
    }
    use ProjPoint::{Finite, Infinity};
    Ok(match (x, y, z) {
        (Finite(x), Finite(y), Finite(z)) => z
            .try_sub(x)?
            .try_mul(&x.try_sub(y)?)?
            .try_div(&z.try_sub(y)?)?,
        (Infinity, Finite(y), Finite(z)) => y.try_sub(z)?.try_inv()?,
        (Finite(x), Infinity, Finite(z)) => z.try_sub(x)?,
        (Finite(x), Finite(y), Infinity) => x.try_sub(y)?,
        _ => unreachable!(),
    })
}

/// `(x₀, …, x_n) ↦ (⟨φ(x₀,x₁,x₂)⟩, [φ(x₀,x₁,x_k)/φ(x₀,x₁,x₂)]_{k≥3})`.
///
/// A triple maps to the empty tuple, i.e. into `R_F[Z_0] = R_F`.
pub fn canonicalize<F: Field>(t: &ConfigTuple<F>) -> Result<(F::Class, ZTuple<F>)> {
    let p = t.points();
    if p.len() < 3 {
        return Err(Error::InvalidArgument(alloc::format!(
            "canonicalize needs at least 3 points, got {}",
            p.len()
        )));
    }
    let base = phi(&p[0], &p[1], &p[2])?;
    let entries = p[3..]
        .iter()
        .map(|q| phi(&p[0], &p[1], q)?.try_div(&base).map_err(Error::from))
        .collect::<Result<Vec<F>>>()?;
    Ok((base.square_class()?, ZTuple::new(entries)?))
}

/// Finite formal `Z`-combination of configuration tuples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfigChain<F> {
    terms: BTreeMap<ConfigTuple<F>, BigInt>,
}

impl<F: Field> Default for ConfigChain<F> {
    fn default() -> Self {
        ConfigChain {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Field> ConfigChain<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_tuple(t: ConfigTuple<F>) -> Self {
        let mut out = Self::zero();
        out.add_term(t, BigInt::one());
        out
    }

    pub fn add_term(&mut self, t: ConfigTuple<F>, n: BigInt) {
        if n.is_zero() {
            return;
        }
        let e = self.terms.entry(t.clone()).or_insert_with(BigInt::zero);
        *e += n;
        if e.is_zero() {
            self.terms.remove(&t);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ConfigTuple<F>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<F: Field + fmt::Display> fmt::Display for ConfigChain<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, n)) in self.terms.iter().enumerate() {
            let neg = n.sign() == num_bigint::Sign::Minus;
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (_, true) => f.write_str(" - ")?,
                (0, false) => {}
                (_, false) => f.write_str(" + ")?,
            }
            let m = n.magnitude();
            if !m.is_one() {
                write!(f, "{m}")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// `d(x₀, …, x_n) = Σ (−1)^i (x₀, …, x̂_i, …, x_n)`, extended linearly.
pub fn boundary<F: Field>(c: &ConfigChain<F>) -> Result<ConfigChain<F>> {
    let mut lengths = c.terms().map(|(t, _)| t.len());
    if let Some(n) = lengths.next() {
        if lengths.any(|m| m != n) {
            return Err(Error::InvalidArgument(
                "boundary needs tuples of one length".into(),
            ));
        }
    }
    let mut out = ConfigChain::zero();
    for (t, n) in c.terms() {
        for i in 0..t.len() {
            let sign = if i % 2 == 0 { n.clone() } else { -n };
            out.add_term(t.face(i), sign);
        }
    }
    Ok(out)
}

/// Finite sum `Σ r_t · t` over `Z`-tuples with group-ring coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RFModuleElement<F: Field> {
    terms: BTreeMap<ZTuple<F>, GroupRingElement<F::Class>>,
}

impl<F: Field> Default for RFModuleElement<F> {
    fn default() -> Self {
        RFModuleElement {
            terms: BTreeMap::new(),
        }
    }
}

impl<F: Field> RFModuleElement<F> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(t: ZTuple<F>) -> Self {
        let mut out = Self::zero();
        out.add_term(t, GroupRingElement::one());
        out
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (ZTuple<F>, GroupRingElement<F::Class>)>,
    ) -> Self {
        let mut out = Self::zero();
        for (t, r) in terms {
            out.add_term(t, r);
        }
        out
    }

    pub fn add_term(&mut self, t: ZTuple<F>, r: GroupRingElement<F::Class>) {
        if r.is_zero() {
            return;
        }
        let sum = match self.terms.get(&t) {
            Some(old) => old + &r,
            None => r,
        };
        if sum.is_zero() {
            self.terms.remove(&t);
        } else {
            self.terms.insert(t, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ZTuple<F>, &GroupRingElement<F::Class>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, t: &ZTuple<F>) -> GroupRingElement<F::Class> {
        self.terms.get(t).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the empty tuple, for elements of `R_F[Z_0] = R_F`.
    pub fn scalar_part(&self) -> GroupRingElement<F::Class> {
        self.coefficient(&ZTuple::empty())
    }
}

impl<F: Field> Add for RFModuleElement<F> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (t, r) in rhs.terms {
            self.add_term(t, r);
        }
        self
    }
}

impl<F: Field> Neg for RFModuleElement<F> {
    type Output = Self;
    fn neg(self) -> Self {
        RFModuleElement {
            terms: self.terms.into_iter().map(|(t, r)| (t, -r)).collect(),
        }
    }
}

impl<F: Field> Sub for RFModuleElement<F> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<F: Field> fmt::Display for RFModuleElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (t, r)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({r}){t}")?;
        }
        Ok(())
    }
}

/// `R_F[Z_n] → R_F[Z_{n−1}]`: lift each tuple to `(0, ∞, 1, z…)`, take the
/// boundary, and read every face back through [`canonicalize`].
pub fn induced_d1<F: Field>(e: &RFModuleElement<F>) -> Result<RFModuleElement<F>> {
    let mut out = RFModuleElement::zero();
    for (t, r) in e.terms() {
        let d = boundary(&ConfigChain::from_tuple(t.representative()))?;
        for (face, n) in d.terms() {
            let (class, z) = canonicalize(face)?;
            out.add_term(z, r.shift(&class).scale(n));
        }
    }
    Ok(out)
}

/// `true` when `g` fixes every point of `t`.
pub fn stabilizes<F: Field>(g: &SL2Matrix<F>, t: &ConfigTuple<F>) -> Result<bool> {
    Ok(&t.act(g)? == t)
}
