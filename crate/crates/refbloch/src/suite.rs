//! The verification suite: one entry per verified statement, each PROVED by
//! kernel-checked certificates or CHECKED by seeded property tests.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use refbloch_core::certifier::{LocalStore, Proved, Prover, SearchConfig};
use refbloch_core::field::{BackendKind, Field, Rational, TowerElement, DEFAULT_DEPTH_CAP};

use crate::catalog::{constancy_runs, failure_reason, psi_runs, Run};
use crate::checks::{self, SampleField, Tally};
use crate::json::proof_to_json;
use crate::samples::{self, rng};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Proved,
    Refuted,
    Checked,
    NotFound,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Proved => "PROVED",
            Status::Refuted => "REFUTED",
            Status::Checked => "CHECKED",
            Status::NotFound => "NOT_FOUND",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub backend: BackendKind,
    pub seed: u64,
    /// Random instances per certified tactic; property checks draw five times as many.
    pub samples: usize,
    pub pool_depth: usize,
    /// Depth cap for generated and parsed towers.
    pub tower_depth: usize,
    pub format: Format,
    pub workers: usize,
    /// Include wall-clock times, which makes reports differ between runs.
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            backend: BackendKind::Tower,
            seed: 1,
            samples: 20,
            pool_depth: SearchConfig::default().pool_depth,
            tower_depth: DEFAULT_DEPTH_CAP,
            format: Format::Text,
            workers: 4,
            timings: false,
        }
    }
}

impl RunConfig {
    pub fn search(&self) -> SearchConfig {
        SearchConfig {
            pool_depth: self.pool_depth,
            ..SearchConfig::default()
        }
    }

    fn checks(&self) -> usize {
        5 * self.samples
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteEntry {
    pub label: String,
    pub status: Status,
    pub detail: String,
    /// `sha256:` digest of the entry's certificates as compact JSON.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportConfig {
    pub backend: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub pool_depth: usize,
    pub tower_depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub config: ReportConfig,
    pub entries: Vec<SuiteEntry>,
    pub exit_code: i32,
}

impl SuiteReport {
    /// 1 if any entry is REFUTED or NOT_FOUND, else 0.
    pub fn exit_code(entries: &[SuiteEntry]) -> i32 {
        i32::from(
            entries
                .iter()
                .any(|e| matches!(e.status, Status::Refuted | Status::NotFound)),
        )
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "suite on the {} backend, seed {}, {} samples\n",
            self.config.backend, self.config.seed, self.config.samples
        );
        for e in &self.entries {
            s.push_str(&format!(
                "{:<9}  {}\n           {}\n",
                e.status.to_string(),
                e.label,
                e.detail
            ));
            if let Some(c) = &e.certificate {
                s.push_str(&format!("           certificates {c}\n"));
            }
            if let Some(ms) = e.elapsed_ms {
                s.push_str(&format!("           {ms} ms\n"));
            }
        }
        s.push_str(&format!("exit code {}\n", self.exit_code));
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

/// What one entry produced before labelling and timing.
struct Outcome {
    status: Status,
    detail: String,
    proofs: Vec<Value>,
}

impl Outcome {
    fn skipped(reason: &str) -> Self {
        Outcome {
            status: Status::Skipped,
            detail: reason.into(),
            proofs: Vec::new(),
        }
    }

    fn from_tally(t: &Tally) -> Self {
        let status = if t.ok() {
            Status::Checked
        } else {
            Status::Refuted
        };
        Outcome {
            status,
            detail: t.to_string(),
            proofs: Vec::new(),
        }
    }
}

type EntryFn = fn(&RunConfig, u64) -> Outcome;

/// Labels and drivers, one per verified statement.
const ENTRIES: [(&str, EntryFn); 9] = [
    (
        "square-class notation and group-ring algebra",
        notation_entry,
    ),
    (
        "real quadratically closed fields: two square classes and a 2-divisible wedge square",
        real_closed_entry,
    ),
    (
        "lambda is well defined on the pre-Bloch group",
        lambda_entry,
    ),
    (
        "Lambda is well defined on the refined pre-Bloch group",
        big_lambda_entry,
    ),
    (
        "psi identities: additivity, swap, order two and squares",
        psi_entry,
    ),
    ("C(x) is constant and fixed by <-1>", constancy_entry),
    (
        "trivial <-1> action, vanishing psi and lambda_1 over real closed fields",
        trivial_action_entry,
    ),
    (
        "configuration complex: canonicalization, boundaries and induced d1",
        configuration_entry,
    ),
    (
        "Milnor K-theory: mod-2 decomposition and halving",
        milnor_entry,
    ),
];

pub fn run_suite(config: &RunConfig) -> SuiteReport {
    let results: Mutex<Vec<Option<SuiteEntry>>> = Mutex::new(vec![None; ENTRIES.len()]);
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..config.workers.clamp(1, ENTRIES.len()) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some((label, run)) = ENTRIES.get(i) else {
                    break;
                };
                let start = Instant::now();
                let out = run(config, i as u64);
                let entry = SuiteEntry {
                    label: label.to_string(),
                    status: out.status,
                    detail: out.detail,
                    certificate: (!out.proofs.is_empty()).then(|| digest(&out.proofs)),
                    elapsed_ms: config.timings.then(|| start.elapsed().as_millis() as u64),
                };
                results.lock().expect("no worker panicked")[i] = Some(entry);
            });
        }
    });
    let mut entries: Vec<SuiteEntry> = results
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|e| e.expect("every entry ran"))
        .collect();
    entries.sort_by(|a, b| a.label.cmp(&b.label));
    let exit_code = SuiteReport::exit_code(&entries);
    SuiteReport {
        schema_version: REPORT_SCHEMA_VERSION,
        config: ReportConfig {
            backend: config.backend.name(),
            seed: config.seed,
            samples: config.samples,
            pool_depth: config.pool_depth,
            tower_depth: config.tower_depth,
        },
        entries,
        exit_code,
    }
}

fn digest(proofs: &[Value]) -> String {
    let text = serde_json::to_string(proofs).expect("JSON values serialize");
    let hash = Sha256::digest(text.as_bytes());
    format!("sha256:{hash:x}")
}

fn stream(config: &RunConfig, entry: u64) -> u64 {
    config
        .seed
        .wrapping_mul(0x9e37_79b9_7f4a_7c15)
        .wrapping_add(entry)
}

fn tower_only(config: &RunConfig) -> Option<Outcome> {
    (config.backend != BackendKind::Tower).then(|| Outcome::skipped("needs the tower backend"))
}

fn notation_entry(config: &RunConfig, entry: u64) -> Outcome {
    let seed = stream(config, entry);
    let t = match config.backend {
        BackendKind::Rational => checks::group_ring_algebra::<Rational>(seed, config.checks()),
        BackendKind::Tower => checks::group_ring_algebra::<TowerElement>(seed, config.checks()),
    };
    Outcome::from_tally(&t)
}

fn real_closed_entry(config: &RunConfig, entry: u64) -> Outcome {
    if let Some(o) = tower_only(config) {
        return o;
    }
    let seed = stream(config, entry);
    let mut t = checks::tower_square_classes(seed, config.checks());
    t.merge(checks::wedge_halving(seed, config.checks()));
    t.merge(checks::field_kernel(
        seed,
        config.checks(),
        config.tower_depth.min(4),
    ));
    Outcome::from_tally(&t)
}

fn lambda_entry(config: &RunConfig, entry: u64) -> Outcome {
    let t = checks::lambda_on_r(stream(config, entry), config.checks());
    let mut o = Outcome::from_tally(&t);
    o.detail = format!("over the prime basis of Q: {}", o.detail);
    o
}

fn big_lambda_entry(config: &RunConfig, entry: u64) -> Outcome {
    let seed = stream(config, entry);
    let t = match config.backend {
        BackendKind::Rational => checks::lambda1_on_s::<Rational>(seed, config.checks()),
        BackendKind::Tower => checks::lambda1_on_s::<TowerElement>(seed, config.checks()),
    };
    Outcome::from_tally(&t)
}

fn certified<F: SampleField>(runs: Vec<Run<F>>) -> Outcome {
    let total = runs.len();
    let mut proofs = Vec::new();
    let mut missing: Vec<String> = Vec::new();
    for (name, run) in runs {
        match run
            .map_err(|e| failure_reason(&e))
            .and_then(|p: Proved<F>| {
                proof_to_json(&p.claim, &p.certificate).map_err(|e| e.to_string())
            }) {
            Ok((claim, cert)) => proofs.push(json!({ "claim": claim, "certificate": cert })),
            Err(reason) => missing.push(format!("{name}: {reason}")),
        }
    }
    if missing.is_empty() {
        Outcome {
            status: Status::Proved,
            detail: format!("{total} certificates checked by the kernel"),
            proofs,
        }
    } else {
        let detail = format!(
            "{} of {total} not certified; {}",
            missing.len(),
            missing.join("; ")
        );
        Outcome {
            status: Status::NotFound,
            detail,
            proofs,
        }
    }
}

fn with_prover<F: SampleField, T>(config: &RunConfig, f: impl FnOnce(&Prover<'_, F>) -> T) -> T {
    let store = LocalStore::default();
    let prover = Prover::new(config.search(), &store);
    f(&prover)
}

fn psi_entry(config: &RunConfig, _: u64) -> Outcome {
    match config.backend {
        BackendKind::Rational => certified(with_prover::<Rational, _>(config, psi_runs)),
        BackendKind::Tower => certified(with_prover::<TowerElement, _>(config, psi_runs)),
    }
}

fn constancy_entry(config: &RunConfig, _: u64) -> Outcome {
    match config.backend {
        BackendKind::Rational => certified(with_prover::<Rational, _>(config, constancy_runs)),
        BackendKind::Tower => certified(with_prover::<TowerElement, _>(config, constancy_runs)),
    }
}

/// A random argument for the tower-only tactics: a rational of either sign.
pub fn tactic_sample(r: &mut impl Rng, positive: bool) -> TowerElement {
    let q = samples::rational_positive(r, 12);
    let x = TowerElement::from_rational(q);
    if positive {
        x
    } else {
        x.negate()
    }
}

/// `ψ_i(x) = 0` and `⟨−1⟩[x] = [x]` at `samples` positive and negative points.
pub fn trivial_action_runs(
    prover: &Prover<'_, TowerElement>,
    seed: u64,
    samples: usize,
) -> Vec<Run<TowerElement>> {
    let mut r = rng(seed, 20);
    let mut out = Vec::new();
    for _ in 0..samples {
        let x = tactic_sample(&mut r, true);
        for i in 1..=2u8 {
            out.push((
                format!("psi{i}-vanish({x})"),
                prover.psi_vanish_positive(i, &x),
            ));
        }
        out.push((format!("trivial-action({x})"), prover.trivial_action(&x)));
    }
    for _ in 0..samples {
        let x = tactic_sample(&mut r, false);
        out.push((format!("trivial-action({x})"), prover.trivial_action(&x)));
    }
    out
}

fn trivial_action_entry(config: &RunConfig, entry: u64) -> Outcome {
    if let Some(o) = tower_only(config) {
        return o;
    }
    let seed = stream(config, entry);
    let mut out = certified(with_prover::<TowerElement, _>(config, |p| {
        trivial_action_runs(p, seed, config.samples)
    }));
    let t = checks::lambda1_vanishes_on_tower(seed, config.checks());
    if !t.ok() {
        out.status = Status::Refuted;
    }
    out.detail = format!("{}; lambda_1([x]) = 0: {t}", out.detail);
    out
}

fn configuration_entry(config: &RunConfig, entry: u64) -> Outcome {
    let seed = stream(config, entry);
    let n = config.checks();
    let mut t = checks::canonicalize_invariance(seed, n / 2);
    t.merge(checks::canonical_round_trip(seed, n));
    t.merge(checks::boundary_squares_to_zero(seed, n / 5));
    t.merge(checks::induced_d1_matches_lambda1(seed, n));
    let mut o = Outcome::from_tally(&t);
    o.detail = format!("over Q: {}", o.detail);
    o
}

fn milnor_entry(config: &RunConfig, entry: u64) -> Outcome {
    if let Some(o) = tower_only(config) {
        return o;
    }
    let seed = stream(config, entry);
    let mut t = checks::milnor_mod2(seed, config.checks());
    t.merge(checks::milnor_halving(seed, config.checks() / 2));
    Outcome::from_tally(&t)
}
