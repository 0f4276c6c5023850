//! Free precursors of `P(F)` and `RP(F)`, the five-term relations, and the
//! invariants `λ`, `λ₁` and `Λ = (λ₁, λ₂)`.
//!
//! Equality here is equality in the free module. Whether an element vanishes
//! in `RP(F)` itself is a question for [`crate::certifier`].

mod element;
mod relations;

pub use element::{coinvariants, PElement, RPElement};
pub(crate) use relations::check_pair;
pub use relations::{
    big_lambda, c_element, lambda1, lambda2, lambda_basis, psi, psi1, psi2, r_relation,
    relation_arguments, s_relation, LambdaTarget,
};

#[cfg(test)]
mod tests;
