use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_traits::Zero;

use super::backend::Backend;
use super::kernel::{check_certificate, Certificate, CertificateTerm, IdentityClaim};
use crate::bloch::{relation_arguments, s_relation, RPElement};
use crate::error::{Error, Result};
use crate::field::{Field, SquareClass};
use crate::linalg::{solve_integer, SparseVec};
use crate::square_algebra::GroupRingElement;

/// Extra seeds tried in the last stage.
const AUXILIARY_SEEDS: [i64; 3] = [2, 3, -2];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Rounds of `t ↦ 1−t`, `t ↦ 1/t` applied to the seeds.
    pub pool_depth: usize,
    /// Columns allowed in one linear system.
    pub max_columns: usize,
    /// Size bound on the multiplier subgroup.
    pub multiplier_cap: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            pool_depth: 3,
            max_columns: 20_000,
            multiplier_cap: 16,
        }
    }
}

/// Relation instances available to the search: every ordered pair of
/// distinct pool values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstancePool<F: Field> {
    values: BTreeSet<F>,
    depth: usize,
}

impl<F: Field> InstancePool<F> {
    /// Close `seeds` under `t ↦ 1−t` and `t ↦ 1/t` for `depth` rounds; `0` and `1` are dropped.
    pub fn closure(seeds: impl IntoIterator<Item = F>, depth: usize) -> Result<Self> {
        let mut values: BTreeSet<F> = BTreeSet::new();
        let mut frontier: Vec<F> = Vec::new();
        for s in seeds {
            if admissible(&s) && values.insert(s.clone()) {
                frontier.push(s);
            }
        }
        for _ in 0..depth {
            let mut next = Vec::new();
            for v in &frontier {
                for w in [v.one_minus()?, v.try_inv()?] {
                    if admissible(&w) && values.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(InstancePool { values, depth })
    }

    pub fn values(&self) -> impl Iterator<Item = &F> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&F, &F)> {
        self.values.iter().flat_map(move |x| {
            self.values
                .iter()
                .filter(move |y| *y != x)
                .map(move |y| (x, y))
        })
    }

    pub fn pair_count(&self) -> usize {
        let n = self.values.len();
        n * n.saturating_sub(1)
    }
}

fn admissible<F: Field>(x: &F) -> bool {
    !x.is_zero() && !x.is_one()
}

/// Size of one attempted linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageReport {
    pub values: usize,
    pub pairs: usize,
    pub multipliers: usize,
    pub columns: usize,
    pub rows: usize,
}

/// Why a search came back empty: the systems tried, smallest first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchDiagnostics {
    pub stages: Vec<StageReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome<F: Field> {
    Found(Certificate<F>),
    NotFound(SearchDiagnostics),
}

/// Look for a certificate with instances drawn from `pool` and coefficients `±⟨m⟩`.
///
/// `None` means the span of the flattened instances misses the target.
pub fn search_in_pool<F: Backend>(
    claim: &IdentityClaim<F>,
    pool: &InstancePool<F>,
    config: &SearchConfig,
    report: &mut StageReport,
) -> Result<Option<Certificate<F>>> {
    if claim.target.is_zero() {
        return Ok(Some(Certificate::empty()));
    }
    let target_classes: Vec<F::Class> = {
        let mut set = BTreeSet::new();
        for (_, r) in claim.target.terms() {
            set.extend(r.classes().cloned());
        }
        set.into_iter().collect()
    };
    let multipliers = F::multipliers(&target_classes, config.multiplier_cap);
    let columns = pool.pair_count() * multipliers.len();
    *report = StageReport {
        values: pool.len(),
        pairs: pool.pair_count(),
        multipliers: multipliers.len(),
        columns,
        rows: 0,
    };
    if columns > config.max_columns {
        return Err(Error::TooLarge {
            columns,
            bound: config.max_columns,
        });
    }

    let mut rows: BTreeMap<(F, F::Class), usize> = BTreeMap::new();
    let mut flatten = |e: &RPElement<F>, shift: &F::Class| -> SparseVec {
        let mut out = Vec::new();
        for (x, r) in e.terms() {
            for (c, n) in r.terms() {
                let key = (x.clone(), c.product(shift));
                let next = rows.len();
                let row = *rows.entry(key).or_insert(next);
                out.push((row, n.clone()));
            }
        }
        out
    };

    let target = flatten(&claim.target, &F::Class::identity());
    let mut instances: Vec<(F, F, F::Class)> = Vec::with_capacity(columns);
    let mut cols: Vec<SparseVec> = Vec::with_capacity(columns);
    for (x, y) in pool.pairs() {
        let rel = s_relation(x, y)?;
        for m in &multipliers {
            cols.push(flatten(&rel, m));
            instances.push((x.clone(), y.clone(), m.clone()));
        }
    }
    report.rows = rows.len();

    let Some(solution) = solve_integer(&cols, &target, false) else {
        return Ok(None);
    };
    let terms = solution
        .particular
        .iter()
        .zip(instances)
        .filter(|(n, _)| !n.is_zero())
        .map(|(n, (x, y, m))| CertificateTerm {
            coefficient: GroupRingElement::from_terms([(m, n.clone())]),
            x,
            y,
        })
        .collect();
    let cert = Certificate::from_terms(terms).normalized();
    if !check_certificate(claim, &cert)? {
        return Err(Error::InvalidArgument(alloc::format!(
            "search produced a certificate that fails to check for {}",
            claim.label
        )));
    }
    Ok(Some(cert))
}

/// Staged search: the claim's own support, then auxiliary small integers,
/// then the relation arguments of seed pairs, then pairwise products and
/// quotients of the seeds.
///
/// `hints` join the seeds from the first stage. A pool exceeding
/// `max_columns` in the first stage is an error; later stages that grow too
/// large are recorded and skipped.
pub fn search_certificate<F: Backend>(
    claim: &IdentityClaim<F>,
    hints: &[F],
    config: &SearchConfig,
) -> Result<SearchOutcome<F>> {
    if claim.target.is_zero() {
        return Ok(SearchOutcome::Found(Certificate::empty()));
    }
    let mut seeds: BTreeSet<F> = claim.target.support().cloned().collect();
    seeds.extend(hints.iter().cloned());
    seeds.insert(F::from_i64(-1));
    let mut diagnostics = SearchDiagnostics::default();

    for stage in 0..4 {
        let base: Vec<F> = seeds.iter().cloned().collect();
        match stage {
            1 => seeds.extend(AUXILIARY_SEEDS.iter().map(|&n| F::from_i64(n))),
            2 => {
                for (i, a) in base.iter().enumerate() {
                    for b in &base[i + 1..] {
                        if admissible(a) && admissible(b) {
                            seeds.extend(relation_arguments(a, b)?);
                        }
                    }
                }
            }
            3 => {
                for a in &base {
                    for b in &base {
                        seeds.insert(a.try_mul(b)?);
                        seeds.insert(a.try_div(b)?);
                    }
                }
            }
            _ => {}
        }
        let pool = InstancePool::closure(seeds.iter().cloned(), config.pool_depth)?;
        let mut report = StageReport {
            values: 0,
            pairs: 0,
            multipliers: 0,
            columns: 0,
            rows: 0,
        };
        match search_in_pool(claim, &pool, config, &mut report) {
            Ok(Some(cert)) => return Ok(SearchOutcome::Found(cert)),
            Ok(None) => diagnostics.stages.push(report),
            Err(Error::TooLarge { .. }) if stage > 0 => {
                diagnostics.stages.push(report);
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SearchOutcome::NotFound(diagnostics))
}
