//! Certificates for identities in `RP(F)`: a kernel that re-expands
//! relation instances, a search over finite instance pools, refutation by
//! invariants, and tactics packaging the standard identities.

mod backend;
mod kernel;
mod refute;
mod search;
mod tactics;

pub use backend::Backend;
pub use kernel::{check_certificate, Certificate, CertificateTerm, IdentityClaim};
pub use refute::{refute_via_invariants, RefuteOutcome};
pub use search::{
    search_certificate, search_in_pool, InstancePool, SearchConfig, SearchDiagnostics,
    SearchOutcome, StageReport,
};
pub use tactics::{
    c_constant_claim, c_symmetric_claim, psi_additivity_claim, psi_order2_claim, psi_square_claim,
    psi_square_double_claim, psi_swap_claim, psi_vanish_claim, trivial_action_claim,
    CertificateStore, LocalStore, NoStore, Proved, Prover, TacticError, TacticResult,
};
