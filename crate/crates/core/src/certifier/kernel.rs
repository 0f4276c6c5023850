use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::bloch::{check_pair, s_relation, RPElement};
use crate::error::Result;
use crate::field::Field;
use crate::square_algebra::GroupRingElement;

/// An assertion that `target` vanishes in `RP(F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityClaim<F: Field> {
    pub target: RPElement<F>,
    pub label: String,
}

impl<F: Field> IdentityClaim<F> {
    pub fn new(target: RPElement<F>, label: impl Into<String>) -> Self {
        IdentityClaim {
            target,
            label: label.into(),
        }
    }
}

/// One summand `coefficient · S_{x,y}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CertificateTerm<F: Field> {
    pub coefficient: GroupRingElement<F::Class>,
    pub x: F,
    pub y: F,
}

/// An explicit `R_F`-combination of relation instances.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<F: Field> {
    terms: Vec<CertificateTerm<F>>,
}

impl<F: Field> Default for Certificate<F> {
    fn default() -> Self {
        Certificate { terms: Vec::new() }
    }
}

impl<F: Field> Certificate<F> {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Terms are kept verbatim; malformed instances surface in [`check_certificate`].
    pub fn from_terms(terms: Vec<CertificateTerm<F>>) -> Self {
        Certificate { terms }
    }

    pub fn terms(&self) -> &[CertificateTerm<F>] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<CertificateTerm<F>> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merge repeated instances, drop zero coefficients, sort by instance.
    pub fn normalized(&self) -> Self {
        let mut merged: BTreeMap<(F, F), GroupRingElement<F::Class>> = BTreeMap::new();
        for t in &self.terms {
            let e = merged.entry((t.x.clone(), t.y.clone())).or_default();
            *e = &*e + &t.coefficient;
        }
        Certificate {
            terms: merged
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((x, y), coefficient)| CertificateTerm { coefficient, x, y })
                .collect(),
        }
    }

    /// Multiply every coefficient by `r`.
    pub fn scale(&self, r: &GroupRingElement<F::Class>) -> Self {
        Certificate {
            terms: self
                .terms
                .iter()
                .map(|t| CertificateTerm {
                    coefficient: r * &t.coefficient,
                    x: t.x.clone(),
                    y: t.y.clone(),
                })
                .collect(),
        }
        .normalized()
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Certificate { terms }.normalized()
    }

    /// `Σ coefficient · S_{x,y}` in the free module.
    pub fn expand(&self) -> Result<RPElement<F>> {
        let mut acc = RPElement::zero();
        for t in &self.terms {
            check_pair(&t.x, &t.y)?;
            acc = acc + s_relation(&t.x, &t.y)?.scale(&t.coefficient);
        }
        Ok(acc)
    }
}

impl<F: Field> fmt::Display for Certificate<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})·S({}, {})", t.coefficient, t.x, t.y)?;
        }
        Ok(())
    }
}

/// The trusted kernel: re-expand every relation instance and compare exactly.
///
/// Malformed instances (`x` or `y` in `{0, 1}`, or `x = y`) are errors rather than `false`.
pub fn check_certificate<F: Field>(
    claim: &IdentityClaim<F>,
    cert: &Certificate<F>,
) -> Result<bool> {
    Ok(cert.expand()? == claim.target)
}
