//! Exact algebra for refined scissors-congruence computations.
//!
//! The crate is `no_std` (it needs `alloc`) and purely functional: every value
//! is immutable after construction and every operation is deterministic.
//!
//! * [`field`]: exact ordered fields, the rationals and quadratic towers of
//!   constructible reals.
//! * [`square_algebra`]: group rings of square classes, symmetric and
//!   exterior squares over a multiplicative basis.
//! * [`bloch`]: free precursors of the (refined) pre-Bloch groups, their
//!   five-term relations and the invariants `λ`, `λ₁`, `λ₂`, `Λ`.
//! * [`certifier`]: a small kernel checking relation certificates, an exact
//!   integer search for them, and tactics packaging the standard identities.
//! * [`configurations`]: `SL₂` acting on `ℙ¹`, tuple complexes and their
//!   cross-ratio canonical forms.
//! * [`expr`]: field-element expressions and their evaluation.
//! * [`milnor`]: Milnor K-symbols and their mod-2 shadow over real
//!   quadratically closed fields.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bloch;
pub mod certifier;
pub mod configurations;
pub mod expr;
pub mod field;
pub mod linalg;
pub mod milnor;
pub mod square_algebra;

mod error;

pub use error::{Error, Result};
