use alloc::vec::Vec;

use num_integer::Integer;

use crate::field::{Field, QClass, Rational, SquareClass, TowerClass, TowerElement};
use crate::square_algebra::{generated_subgroup, Factorize, MultiplicativeBasis, SymSquareElement};

/// Backend-specific choices made by search and refutation.
pub trait Backend: Factorize {
    /// Classes `⟨m⟩` tried as multipliers of relation instances.
    fn multipliers(target_classes: &[Self::Class], cap: usize) -> Vec<Self::Class>;

    /// A basis over which `λ₂` images are trustworthy, if `values` admit one.
    fn refutation_basis(values: &[Self]) -> Option<MultiplicativeBasis<Self>>;

    /// Whether `s` is nonzero in `S²_Z(F^×)` itself, not only in the free window.
    fn sym_detectably_nonzero(s: &SymSquareElement, basis: &MultiplicativeBasis<Self>) -> bool;
}

impl Backend for Rational {
    fn multipliers(target_classes: &[QClass], cap: usize) -> Vec<QClass> {
        let mut gens: Vec<QClass> = alloc::vec![QClass::minus_one()];
        gens.extend(target_classes.iter().cloned());
        match generated_subgroup(gens, cap) {
            Ok(mut g) => {
                g.sort();
                g
            }
            Err(_) => {
                // too many generators: fall back to the classes themselves and ±1
                let mut g: Vec<QClass> = alloc::vec![QClass::identity(), QClass::minus_one()];
                g.extend(target_classes.iter().cloned());
                g.sort();
                g.dedup();
                g.truncate(cap);
                g
            }
        }
    }

    fn refutation_basis(values: &[Rational]) -> Option<MultiplicativeBasis<Rational>> {
        Some(MultiplicativeBasis::primes_covering(values.iter()))
    }

    /// `(−1)∘p` has order two in `S²_Z(Q^×)`, so those coordinates count mod 2.
    fn sym_detectably_nonzero(s: &SymSquareElement, basis: &MultiplicativeBasis<Rational>) -> bool {
        let sign = basis.index_of(&Rational::from_i64(-1));
        s.diagonal().next().is_some()
            || s.off_diagonal().any(|((i, j), v)| {
                if Some(*i) == sign || Some(*j) == sign {
                    v.is_odd()
                } else {
                    true
                }
            })
    }
}

impl Backend for TowerElement {
    fn multipliers(_target_classes: &[TowerClass], _cap: usize) -> Vec<TowerClass> {
        alloc::vec![TowerClass::positive(), TowerClass::negative()]
    }

    /// Rational values only: the primes stay independent among positive
    /// constructible reals even allowing fractional exponents.
    fn refutation_basis(values: &[TowerElement]) -> Option<MultiplicativeBasis<TowerElement>> {
        let rationals: Vec<Rational> = values
            .iter()
            .map(|v| v.as_rational().cloned())
            .collect::<Option<_>>()?;
        let q = MultiplicativeBasis::primes_covering(rationals.iter());
        MultiplicativeBasis::new(
            q.elements()
                .iter()
                .cloned()
                .map(TowerElement::from_rational)
                .collect(),
        )
        .ok()
    }

    /// `S²_Z(R^×) = Z/2·((−1)∘(−1)) ⊕ ∧²(R_{>0})`: the diagonal of a positive
    /// element and every `(−1)∘p` die because `R_{>0}` is 2-divisible.
    fn sym_detectably_nonzero(
        s: &SymSquareElement,
        basis: &MultiplicativeBasis<TowerElement>,
    ) -> bool {
        let sign = basis.index_of(&TowerElement::from_i64(-1));
        let positive_pair = s
            .off_diagonal()
            .any(|((i, j), _)| Some(*i) != sign && Some(*j) != sign);
        positive_pair || sign.is_some_and(|k| s.diagonal().any(|d| *d == k))
    }
}
