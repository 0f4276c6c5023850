use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;

use num_bigint::BigInt;

use super::backend::Backend;
use super::kernel::{check_certificate, Certificate, IdentityClaim};
use super::search::{search_certificate, SearchConfig, SearchDiagnostics, SearchOutcome};
use crate::bloch::{c_element, psi, RPElement};
use crate::error::Error;
use crate::field::{BackendKind, Field, FieldError, SquareClass};
use crate::square_algebra::{bracket, GroupRingElement};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TacticError {
    #[error("no certificate found for {label}")]
    NotFound {
        label: String,
        diagnostics: SearchDiagnostics,
    },
    #[error(transparent)]
    Failed(#[from] Error),
}

impl From<FieldError> for TacticError {
    fn from(e: FieldError) -> Self {
        TacticError::Failed(e.into())
    }
}

pub type TacticResult<T> = core::result::Result<T, TacticError>;

/// A claim together with a certificate that passed the kernel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proved<F: Field> {
    pub claim: IdentityClaim<F>,
    pub certificate: Certificate<F>,
}

/// Certificates keyed by target. Entries are re-checked on every read.
pub trait CertificateStore<F: Field> {
    fn get(&self, target: &RPElement<F>) -> Option<Certificate<F>>;
    fn put(&self, target: &RPElement<F>, cert: &Certificate<F>);
}

/// A store that remembers nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoStore;

impl<F: Field> CertificateStore<F> for NoStore {
    fn get(&self, _target: &RPElement<F>) -> Option<Certificate<F>> {
        None
    }

    fn put(&self, _target: &RPElement<F>, _cert: &Certificate<F>) {}
}

/// Single-threaded in-memory store.
#[derive(Debug)]
pub struct LocalStore<F: Field> {
    entries: RefCell<BTreeMap<RPElement<F>, Certificate<F>>>,
}

impl<F: Field> Default for LocalStore<F> {
    fn default() -> Self {
        LocalStore {
            entries: RefCell::new(BTreeMap::new()),
        }
    }
}

impl<F: Field> LocalStore<F> {
    pub fn len(&self) -> usize {
        self.entries.borrow().len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.borrow().is_empty()
    }
}

impl<F: Field> CertificateStore<F> for LocalStore<F> {
    fn get(&self, target: &RPElement<F>) -> Option<Certificate<F>> {
        self.entries.borrow().get(target).cloned()
    }

    fn put(&self, target: &RPElement<F>, cert: &Certificate<F>) {
        self.entries
            .borrow_mut()
            .insert(target.clone(), cert.clone());
    }
}

fn class_of<F: Field>(x: &F) -> crate::error::Result<GroupRingElement<F::Class>> {
    Ok(GroupRingElement::from_class(x.square_class()?))
}

fn minus_one_class<F: Field>() -> GroupRingElement<F::Class> {
    GroupRingElement::from_class(F::Class::minus_one())
}

fn require_tower<F: Field>() -> TacticResult<()> {
    if F::KIND == BackendKind::Tower {
        Ok(())
    } else {
        Err(Error::TowerOnly.into())
    }
}

/// `ψ_i(xy) − ⟨x⟩ψ_i(y) − ψ_i(x)`.
pub fn psi_additivity_claim<F: Field>(
    index: u8,
    x: &F,
    y: &F,
) -> crate::error::Result<IdentityClaim<F>> {
    let target =
        psi(index, &x.try_mul(y)?)? - psi(index, y)?.shift(&x.square_class()?) - psi(index, x)?;
    Ok(IdentityClaim::new(
        target,
        alloc::format!("psi{index}(xy) = <x>psi{index}(y) + psi{index}(x) at x = {x}, y = {y}"),
    ))
}

/// `⟨⟨x⟩⟩ψ_i(y) − ⟨⟨y⟩⟩ψ_i(x)`.
pub fn psi_swap_claim<F: Field>(index: u8, x: &F, y: &F) -> crate::error::Result<IdentityClaim<F>> {
    let target =
        psi(index, y)?.scale(bracket(x)?.as_ring()) - psi(index, x)?.scale(bracket(y)?.as_ring());
    Ok(IdentityClaim::new(
        target,
        alloc::format!("<<x>>psi{index}(y) = <<y>>psi{index}(x) at x = {x}, y = {y}"),
    ))
}

/// `2ψ_i(−1)`.
pub fn psi_order2_claim<F: Field>(index: u8) -> crate::error::Result<IdentityClaim<F>> {
    let target = psi(index, &F::from_i64(-1))?.scale_int(&BigInt::from(2));
    Ok(IdentityClaim::new(
        target,
        alloc::format!("2 psi{index}(-1) = 0"),
    ))
}

/// `ψ_i(x²) − ⟨⟨x⟩⟩ψ_i(−1)`.
pub fn psi_square_claim<F: Field>(index: u8, x: &F) -> crate::error::Result<IdentityClaim<F>> {
    let target =
        psi(index, &x.try_mul(x)?)? - psi(index, &F::from_i64(-1))?.scale(bracket(x)?.as_ring());
    Ok(IdentityClaim::new(
        target,
        alloc::format!("psi{index}(x^2) = <<x>>psi{index}(-1) at x = {x}"),
    ))
}

/// `2ψ_i(x²)`.
pub fn psi_square_double_claim<F: Field>(
    index: u8,
    x: &F,
) -> crate::error::Result<IdentityClaim<F>> {
    let target = psi(index, &x.try_mul(x)?)?.scale_int(&BigInt::from(2));
    Ok(IdentityClaim::new(
        target,
        alloc::format!("2 psi{index}(x^2) = 0 at x = {x}"),
    ))
}

/// `ψ_i(x)`.
pub fn psi_vanish_claim<F: Field>(index: u8, x: &F) -> crate::error::Result<IdentityClaim<F>> {
    Ok(IdentityClaim::new(
        psi(index, x)?,
        alloc::format!("psi{index}(x) = 0 at x = {x}"),
    ))
}

/// `⟨−1⟩[x] − [x]`.
pub fn trivial_action_claim<F: Field>(x: &F) -> crate::error::Result<IdentityClaim<F>> {
    let gen = RPElement::generator(x.clone())?;
    let target = gen.shift(&F::Class::minus_one()) - gen;
    Ok(IdentityClaim::new(
        target,
        alloc::format!("<-1>[x] = [x] at x = {x}"),
    ))
}

/// `C(x) − C(y)`.
pub fn c_constant_claim<F: Field>(x: &F, y: &F) -> crate::error::Result<IdentityClaim<F>> {
    let target = c_element(x)? - c_element(y)?;
    Ok(IdentityClaim::new(
        target,
        alloc::format!("C(x) = C(y) at x = {x}, y = {y}"),
    ))
}

/// `⟨−1⟩C(x) − C(x)`.
pub fn c_symmetric_claim<F: Field>(x: &F) -> crate::error::Result<IdentityClaim<F>> {
    let c = c_element(x)?;
    let target = c.shift(&F::Class::minus_one()) - c;
    Ok(IdentityClaim::new(
        target,
        alloc::format!("<-1>C(x) = C(x) at x = {x}"),
    ))
}

/// Produces kernel-checked certificates, consulting `store` before searching.
pub struct Prover<'a, F: Field> {
    pub config: SearchConfig,
    pub store: &'a dyn CertificateStore<F>,
}

impl<'a, F: Backend> Prover<'a, F> {
    pub fn new(config: SearchConfig, store: &'a dyn CertificateStore<F>) -> Self {
        Prover { config, store }
    }

    /// Certify `claim`: stored certificate if it checks, otherwise staged search.
    pub fn prove(&self, claim: IdentityClaim<F>, hints: &[F]) -> TacticResult<Proved<F>> {
        if claim.target.is_zero() {
            return Ok(Proved {
                claim,
                certificate: Certificate::empty(),
            });
        }
        if let Some(cert) = self.store.get(&claim.target) {
            if check_certificate(&claim, &cert)? {
                return Ok(Proved {
                    claim,
                    certificate: cert,
                });
            }
        }
        match search_certificate(&claim, hints, &self.config)? {
            SearchOutcome::Found(cert) => {
                self.store.put(&claim.target, &cert);
                Ok(Proved {
                    claim,
                    certificate: cert,
                })
            }
            SearchOutcome::NotFound(diagnostics) => Err(TacticError::NotFound {
                label: claim.label,
                diagnostics,
            }),
        }
    }

    fn composed(&self, claim: IdentityClaim<F>, cert: Certificate<F>) -> TacticResult<Proved<F>> {
        if !check_certificate(&claim, &cert)? {
            return Err(Error::InvalidArgument(alloc::format!(
                "composed certificate fails for {}",
                claim.label
            ))
            .into());
        }
        self.store.put(&claim.target, &cert);
        Ok(Proved {
            claim,
            certificate: cert,
        })
    }

    pub fn psi_additivity(&self, index: u8, x: &F, y: &F) -> TacticResult<Proved<F>> {
        self.prove(psi_additivity_claim(index, x, y)?, &[])
    }

    pub fn psi_swap(&self, index: u8, x: &F, y: &F) -> TacticResult<Proved<F>> {
        self.prove(psi_swap_claim(index, x, y)?, &[])
    }

    pub fn psi_order2(&self, index: u8) -> TacticResult<Proved<F>> {
        self.prove(psi_order2_claim(index)?, &[])
    }

    pub fn psi_square(&self, index: u8, x: &F) -> TacticResult<Proved<F>> {
        self.prove(psi_square_claim(index, x)?, core::slice::from_ref(x))
    }

    /// `2ψ_i(x²) = 2(ψ_i(x²) − ⟨⟨x⟩⟩ψ_i(−1)) + ⟨⟨x⟩⟩·2ψ_i(−1)`.
    pub fn psi_square_double(&self, index: u8, x: &F) -> TacticResult<Proved<F>> {
        let claim = psi_square_double_claim(index, x)?;
        let square = self.psi_square(index, x)?.certificate;
        let order2 = self.psi_order2(index)?.certificate;
        let cert = square
            .scale(&GroupRingElement::integer(2))
            .plus(&order2.scale(bracket(x)?.as_ring()));
        self.composed(claim, cert)
    }

    /// `ψ_i(x) = ψ_i(a²) − ⟨⟨a⟩⟩ψ_i(−1)` for the positive root `a`, whose class is trivial.
    pub fn psi_vanish_positive(&self, index: u8, x: &F) -> TacticResult<Proved<F>> {
        require_tower::<F>()?;
        if !x.is_positive() {
            return Err(Error::InvalidArgument(alloc::format!("{x} is not positive")).into());
        }
        let claim = psi_vanish_claim(index, x)?;
        if claim.target.is_zero() {
            return Ok(Proved {
                claim,
                certificate: Certificate::empty(),
            });
        }
        let (a, _) = x.sqrt_positive(&x.context())?;
        let square = psi_square_claim(index, &a)?;
        debug_assert!(square.target == claim.target);
        let proved = self.prove(square, &[a])?;
        Ok(Proved {
            claim,
            certificate: proved.certificate,
        })
    }

    /// `⟨−1⟩[x] = [x]`: from `ψ₁(x) = ψ₂(x) = 0` when `x > 0`, and from
    /// `(⟨−1⟩ − 1)C(x) = [x] − ⟨−1⟩[x] + ⟨−1⟩[1−x] − [1−x]` when `x < 0`.
    pub fn trivial_action(&self, x: &F) -> TacticResult<Proved<F>> {
        require_tower::<F>()?;
        let claim = trivial_action_claim(x)?;
        let cert = if x.is_positive() {
            let psi1 = self.psi_vanish_positive(1, x)?.certificate;
            let psi2 = self.psi_vanish_positive(2, x)?.certificate;
            psi1.scale(&minus_one_class::<F>())
                .plus(&psi2.scale(&-&class_of(&x.one_minus()?)?))
        } else {
            let m1 = F::from_i64(-1);
            let twist = &minus_one_class::<F>() - &GroupRingElement::one();
            let constant = self.c_constant(x, &m1)?.certificate;
            let symmetric = self.c_symmetric(&m1)?.certificate;
            let shifted = self.trivial_action(&x.one_minus()?)?.certificate;
            constant.scale(&twist).plus(&symmetric).plus(&shifted)
        };
        self.composed(claim, cert)
    }

    pub fn c_constant(&self, x: &F, y: &F) -> TacticResult<Proved<F>> {
        self.prove(c_constant_claim(x, y)?, &[])
    }

    pub fn c_symmetric(&self, x: &F) -> TacticResult<Proved<F>> {
        self.prove(c_symmetric_claim(x)?, &[])
    }

    /// All five items of the `ψ` identities at `(x, y)` for one index.
    pub fn psi_identities(&self, index: u8, x: &F, y: &F) -> TacticResult<Vec<Proved<F>>> {
        Ok(alloc::vec![
            self.psi_additivity(index, x, y)?,
            self.psi_swap(index, x, y)?,
            self.psi_order2(index)?,
            self.psi_square(index, x)?,
            self.psi_square_double(index, x)?,
        ])
    }
}
