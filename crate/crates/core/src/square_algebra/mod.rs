//! The group ring `R_F = Z[F^×/(F^×)²]`, its augmentation ideal, and
//! coordinates for `S²_Z` and `∧²_Z` of a finitely generated window of `F^×`.

mod basis;
mod group_ring;
mod sym;

pub use basis::{coprime_base, Factorize, MultiplicativeBasis, EXPONENT_BOUND};
pub use group_ring::{
    augmentation_square_witness, bracket, bracket_class, generated_subgroup,
    in_augmentation_square, AugmentationIdealElement, GroupRingElement,
};
pub use sym::{
    expand_sym, expand_wedge, halve_wedge, reduce_at_minus_one, HalvedWedge, SymSquareElement,
    WedgeElement,
};
