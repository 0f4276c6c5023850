//! Named certification runs: the `ψ` identities, constancy and symmetry of
//! `C`, and the tower-only vanishing and trivial-action tactics.

use refbloch_core::certifier::{Backend, Proved, Prover, TacticError, TacticResult};
use refbloch_core::field::{BackendKind, Field, Rational};

use crate::samples::lift;

/// Points at which all five `ψ` identities are certified.
pub const PSI_PAIRS: [(i64, i64); 3] = [(2, 3), (2, 2), (-1, 2)];

/// `(x, y)` pairs, as `(num, den)` fractions, at which `C(x) = C(y)` is certified.
pub const CONSTANCY_PAIRS: [((i64, i64), (i64, i64)); 5] = [
    ((2, 1), (3, 1)),
    ((1, 2), (5, 1)),
    ((-1, 1), (2, 1)),
    ((3, 1), (-2, 1)),
    ((-3, 1), (1, 3)),
];

/// Fixed arguments for the tower-only tactics shipped as fixtures.
pub const VANISH_POINTS: [i64; 2] = [2, 3];
pub const TRIVIAL_ACTION_POINTS: [i64; 2] = [2, -2];

pub type Run<F> = (String, TacticResult<Proved<F>>);

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// The five `ψ` identities for both indices at every pair of [`PSI_PAIRS`].
pub fn psi_runs<F: Backend>(prover: &Prover<'_, F>) -> Vec<Run<F>> {
    let mut out = Vec::new();
    for (a, b) in PSI_PAIRS {
        let (x, y) = (F::from_i64(a), F::from_i64(b));
        for i in 1..=2u8 {
            out.push((
                format!("psi{i}-additivity({a},{b})"),
                prover.psi_additivity(i, &x, &y),
            ));
            out.push((format!("psi{i}-swap({a},{b})"), prover.psi_swap(i, &x, &y)));
            out.push((format!("psi{i}-order2"), prover.psi_order2(i)));
            out.push((format!("psi{i}-square({a})"), prover.psi_square(i, &x)));
            out.push((
                format!("psi{i}-square-double({a})"),
                prover.psi_square_double(i, &x),
            ));
        }
    }
    dedup(out)
}

/// `C(x) = C(y)` on [`CONSTANCY_PAIRS`] and `⟨−1⟩C(−1) = C(−1)`.
pub fn constancy_runs<F: Backend>(prover: &Prover<'_, F>) -> Vec<Run<F>> {
    let mut out = Vec::new();
    for ((a, b), (c, d)) in CONSTANCY_PAIRS {
        let (x, y): (F, F) = (lift(&q(a, b)), lift(&q(c, d)));
        out.push((format!("c-constant({x},{y})"), prover.c_constant(&x, &y)));
    }
    out.push((
        "c-symmetric(-1)".into(),
        prover.c_symmetric(&F::from_i64(-1)),
    ));
    out
}

/// `ψ_i(x) = 0` and `⟨−1⟩[x] = [x]` at fixed points; empty off the tower.
pub fn tower_runs<F: Backend>(prover: &Prover<'_, F>) -> Vec<Run<F>> {
    if F::KIND != BackendKind::Tower {
        return Vec::new();
    }
    let mut out = Vec::new();
    for a in VANISH_POINTS {
        for i in 1..=2u8 {
            out.push((
                format!("psi{i}-vanish({a})"),
                prover.psi_vanish_positive(i, &F::from_i64(a)),
            ));
        }
    }
    for a in TRIVIAL_ACTION_POINTS {
        out.push((
            format!("trivial-action({a})"),
            prover.trivial_action(&F::from_i64(a)),
        ));
    }
    out
}

/// Every shipped run, in fixture order.
pub fn fixture_runs<F: Backend>(prover: &Prover<'_, F>) -> Vec<Run<F>> {
    let mut out = psi_runs(prover);
    out.extend(constancy_runs(prover));
    out.extend(tower_runs(prover));
    out
}

fn dedup<F: Field>(runs: Vec<Run<F>>) -> Vec<Run<F>> {
    let mut seen = std::collections::BTreeSet::new();
    runs.into_iter()
        .filter(|(name, _)| seen.insert(name.clone()))
        .collect()
}

/// Short reason for a failed run.
pub fn failure_reason(e: &TacticError) -> String {
    match e {
        TacticError::NotFound { diagnostics, .. } => match diagnostics.stages.last() {
            Some(s) => format!(
                "not found; last stage had {} values, {} pairs, {} columns",
                s.values, s.pairs, s.columns
            ),
            None => "not found".into(),
        },
        TacticError::Failed(e) => e.to_string(),
    }
}
