//! Milnor K-symbols over ordered fields: products, the mod-2 shadow of the
//! decomposition `K_n^M(R) = ⟨{−1,…,−1}⟩ ⊕ K_n^M(R)⁰`, and explicit halving
//! of symbols with positive entries.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{BackendKind, Field};
use crate::square_algebra::{Factorize, MultiplicativeBasis};

/// `{a₁, …, a_n}` with nonzero entries; the empty symbol is the unit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MilnorSymbol<F> {
    entries: Vec<F>,
}

impl<F: Field> MilnorSymbol<F> {
    pub fn new(entries: Vec<F>) -> Result<Self> {
        if entries.iter().any(|a| a.is_zero()) {
            return Err(Error::InvalidArgument(
                "Milnor symbol entries must be nonzero".into(),
            ));
        }
        Ok(MilnorSymbol { entries })
    }

    pub fn unit() -> Self {
        MilnorSymbol {
            entries: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        MilnorSymbol { entries }
    }
}

impl<F: fmt::Display> fmt::Display for MilnorSymbol<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

/// Homogeneous integer combination of symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KMElement<F> {
    degree: usize,
    terms: BTreeMap<MilnorSymbol<F>, BigInt>,
}

impl<F: Field> KMElement<F> {
    pub fn zero(degree: usize) -> Self {
        KMElement {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn symbol(s: MilnorSymbol<F>) -> Self {
        Self::term(s, BigInt::one())
    }

    pub fn term(s: MilnorSymbol<F>, n: BigInt) -> Self {
        let mut out = Self::zero(s.degree());
        out.add_term(s, n);
        out
    }

    fn add_term(&mut self, s: MilnorSymbol<F>, n: BigInt) {
        if n.is_zero() {
            return;
        }
        let e = self.terms.entry(s.clone()).or_insert_with(BigInt::zero);
        *e += n;
        if e.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MilnorSymbol<F>, &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        let mut out = Self::zero(self.degree);
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c * n);
        }
        out
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.degree != other.degree {
            return Err(Error::InvalidArgument(alloc::format!(
                "degrees {} and {} differ",
                self.degree,
                other.degree
            )));
        }
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c.clone());
        }
        Ok(out)
    }

    /// Bilinear concatenation.
    pub fn product(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (s, a) in &self.terms {
            for (t, b) in &other.terms {
                out.add_term(s.concat(t), a * b);
            }
        }
        out
    }

    /// Multilinear expansion over `basis`: coordinates on `e_{i₁}⊗…⊗e_{i_n}`.
    ///
    /// Symbols with an entry equal to 1 expand to zero.
    pub fn expand(&self, basis: &MultiplicativeBasis<F>) -> Result<BTreeMap<Vec<usize>, BigInt>>
    where
        F: Factorize,
    {
        let mut out: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
        for (s, c) in &self.terms {
            let mut partial: Vec<(Vec<usize>, BigInt)> = alloc::vec![(Vec::new(), c.clone())];
            for a in s.entries() {
                let exps = basis.factor(a)?;
                let mut next = Vec::new();
                for (idx, coef) in &partial {
                    for (i, e) in exps.iter().enumerate().filter(|(_, e)| **e != 0) {
                        let mut k = idx.clone();
                        k.push(i);
                        next.push((k, coef * e));
                    }
                }
                partial = next;
            }
            for (k, v) in partial {
                let e = out.entry(k.clone()).or_insert_with(BigInt::zero);
                *e += v;
                if e.is_zero() {
                    out.remove(&k);
                }
            }
        }
        Ok(out)
    }
}

impl<F: Field> Add for KMElement<F> {
    type Output = Result<Self>;
    fn add(self, rhs: Self) -> Result<Self> {
        self.try_add(&rhs)
    }
}

impl<F: Field> fmt::Display for KMElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, n)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if n.is_one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "{n}{s}")?;
            }
        }
        Ok(())
    }
}

/// Class of a symbol modulo `K_n^M(R)⁰`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mod2NormalForm {
    Zero,
    /// `{−1, …, −1}` of the given degree.
    MinusOnes(usize),
}

impl fmt::Display for Mod2NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mod2NormalForm::Zero => f.write_str("ZERO"),
            Mod2NormalForm::MinusOnes(n) => {
                f.write_str("{")?;
                for i in 0..*n {
                    f.write_str(if i == 0 { "-1" } else { ", -1" })?;
                }
                f.write_str("}")
            }
        }
    }
}

fn require_tower<F: Field>() -> Result<()> {
    if F::KIND == BackendKind::Tower {
        Ok(())
    } else {
        Err(Error::TowerOnly)
    }
}

/// A positive entry is a square, making the symbol twice another; otherwise
/// `{−a₁, …} = {−1, …} + {a₁, …}` peels every sign into `{−1, …, −1}`.
pub fn mod2_reduce<F: Field>(s: &MilnorSymbol<F>) -> Result<Mod2NormalForm> {
    require_tower::<F>()?;
    if s.entries().iter().any(|a| a.is_positive()) {
        Ok(Mod2NormalForm::Zero)
    } else {
        Ok(Mod2NormalForm::MinusOnes(s.degree()))
    }
}

/// `w` with `2w = s`: replace the first entry by its positive square root.
pub fn halve_positive_symbol<F: Field>(s: &MilnorSymbol<F>) -> Result<KMElement<F>> {
    require_tower::<F>()?;
    let Some(first) = s.entries().first() else {
        return Err(Error::InvalidArgument(
            "the unit symbol has nothing to halve".into(),
        ));
    };
    if let Some(a) = s.entries().iter().find(|a| !a.is_positive()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "entry {a} is not positive"
        )));
    }
    let mut ctx = first.context();
    for a in &s.entries()[1..] {
        ctx = F::join_context(&ctx, &a.context())?;
    }
    let (root, _) = first.sqrt_positive(&ctx)?;
    let mut entries = s.entries().to_vec();
    entries[0] = root;
    Ok(KMElement::symbol(MilnorSymbol::new(entries)?))
}

/// Syntactic Steinberg test: an entry equal to 1, or adjacent entries `a, 1−a`.
pub fn steinberg_trivial<F: Field>(s: &MilnorSymbol<F>) -> bool {
    let e = s.entries();
    e.iter().any(|a| a.is_one())
        || e.windows(2)
            .any(|w| w[0].try_add(&w[1]).is_ok_and(|t| t.is_one()))
}
