use alloc::string::String;
use alloc::vec::Vec;

use super::backend::Backend;
use super::kernel::IdentityClaim;
use crate::bloch::{coinvariants, lambda1, lambda2};
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RefuteOutcome {
    /// The named invariant is nonzero, so the claim is false in `RP(F)`.
    Refuted(String),
    Unknown,
}

/// Apply `Λ = (λ₁, λ₂)`; any nonzero image refutes a zero-claim.
///
/// When no trustworthy basis exists for `λ₂` only `λ₁` is used.
pub fn refute_via_invariants<F: Backend>(claim: &IdentityClaim<F>) -> Result<RefuteOutcome> {
    let l1 = lambda1(&claim.target)?;
    if !l1.is_zero() {
        return Ok(RefuteOutcome::Refuted(alloc::format!("lambda1 = {}", l1)));
    }
    let p = coinvariants(&claim.target);
    if p.is_zero() {
        return Ok(RefuteOutcome::Unknown);
    }
    let mut values: Vec<F> = Vec::new();
    for x in p.support() {
        values.push(x.clone());
        values.push(x.one_minus()?);
    }
    let Some(basis) = F::refutation_basis(&values) else {
        return Ok(RefuteOutcome::Unknown);
    };
    match lambda2(&p, &basis) {
        Ok(s) if F::sym_detectably_nonzero(&s, &basis) => Ok(RefuteOutcome::Refuted(
            alloc::format!("lambda2 has coordinates {:?}", s.entries()),
        )),
        _ => Ok(RefuteOutcome::Unknown),
    }
}
