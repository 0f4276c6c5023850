//! `SL₂(F)` acting on `ℙ¹(F)`, the complex of distinct-point tuples, and
//! its canonical form over `R_F[Z_n]`.

mod complex;
mod projective;

pub use complex::{
    boundary, canonicalize, induced_d1, phi, stabilizes, ConfigChain, ConfigTuple, RFModuleElement,
    ZTuple, INDUCED_D1_SIGN,
};
pub use projective::{moebius_apply, pair_witness, triple_witness, ProjPoint, SL2Matrix};
