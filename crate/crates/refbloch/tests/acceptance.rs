//! Acceptance criteria, one pass/fail line each.

use std::process::Command;
use std::time::{Duration, Instant};

use refbloch::catalog::{constancy_runs, psi_runs, Run};
use refbloch::checks::{self, Tally};
use refbloch::suite::trivial_action_runs;
use refbloch_core::certifier::{check_certificate, LocalStore, Prover, SearchConfig};
use refbloch_core::field::{Rational, TowerElement};

const SEED: u64 = 20240611;

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Tally,
}

const fn secs(s: u64) -> Option<Duration> {
    Some(Duration::from_secs(s))
}

fn field_kernel() -> Tally {
    checks::field_kernel(SEED, 200, 4)
}

fn square_classes() -> Tally {
    checks::tower_square_classes(SEED, 500)
}

fn wedge_halving() -> Tally {
    checks::wedge_halving(SEED, 100)
}

fn lambda_on_r() -> Tally {
    checks::lambda_on_r(SEED, 100)
}

fn lambda1_on_s() -> Tally {
    let mut t = checks::lambda1_on_s::<Rational>(SEED, 100);
    t.merge(checks::lambda1_on_s::<TowerElement>(SEED, 100));
    t
}

fn lambda1_vanishes() -> Tally {
    checks::lambda1_vanishes_on_tower(SEED, 100)
}

fn certifier_soundness() -> Tally {
    let mut t = checks::mutated_certificates_rejected(SEED, 50);
    t.merge(checks::shipped_fixtures_verify());
    t
}

fn record_runs(t: &mut Tally, runs: Vec<Run<TowerElement>>) {
    for (name, run) in runs {
        match run {
            Ok(p) => {
                let ok = check_certificate(&p.claim, &p.certificate).unwrap_or(false);
                t.record(ok, || format!("{name}: kernel rejected the certificate"));
            }
            Err(e) => t.record(false, || format!("{name}: {e}")),
        }
    }
}

fn tactics() -> Tally {
    let store = LocalStore::<TowerElement>::default();
    let prover = Prover::new(
        SearchConfig {
            pool_depth: 3,
            ..SearchConfig::default()
        },
        &store,
    );
    let mut t = Tally::default();
    record_runs(&mut t, psi_runs(&prover));
    record_runs(&mut t, trivial_action_runs(&prover, SEED, 20));
    record_runs(&mut t, constancy_runs(&prover));
    t
}

fn configurations() -> Tally {
    let mut t = checks::canonicalize_invariance(SEED, 50);
    t.merge(checks::canonical_round_trip(SEED, 100));
    t.merge(checks::boundary_squares_to_zero(SEED, 50));
    t.merge(checks::induced_d1_matches_lambda1(SEED, 100));
    t
}

fn milnor() -> Tally {
    let mut t = checks::milnor_mod2(SEED, 100);
    t.merge(checks::milnor_halving(SEED, 50));
    t
}

fn suite_json() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_refbloch"))
        .args([
            "--seed",
            "7",
            "--samples",
            "4",
            "--format",
            "json",
            "run-suite",
        ])
        .output()
        .expect("the binary runs");
    out.stdout
}

fn determinism() -> Tally {
    let (a, b) = (suite_json(), suite_json());
    let mut t = Tally::default();
    t.record(!a.is_empty(), || "empty report".into());
    t.record(a == b, || "reports differ".into());
    t
}

const CRITERIA: [Criterion; 11] = [
    Criterion {
        name: "field kernel",
        limit: secs(10),
        run: field_kernel,
    },
    Criterion {
        name: "square-class structure",
        limit: secs(5),
        run: square_classes,
    },
    Criterion {
        name: "2-divisibility of the wedge square",
        limit: secs(10),
        run: wedge_halving,
    },
    Criterion {
        name: "lambda vanishes on R",
        limit: secs(10),
        run: lambda_on_r,
    },
    Criterion {
        name: "lambda_1 vanishes on S",
        limit: secs(10),
        run: lambda1_on_s,
    },
    Criterion {
        name: "lambda_1 vanishes on the tower",
        limit: secs(5),
        run: lambda1_vanishes,
    },
    Criterion {
        name: "certifier soundness",
        limit: secs(10),
        run: certifier_soundness,
    },
    Criterion {
        name: "identities as certificates",
        limit: secs(120),
        run: tactics,
    },
    Criterion {
        name: "configurations",
        limit: secs(20),
        run: configurations,
    },
    Criterion {
        name: "Milnor K-theory",
        limit: secs(10),
        run: milnor,
    },
    Criterion {
        name: "determinism",
        limit: None,
        run: determinism,
    },
];

fn main() {
    let mut failed = 0;
    for (i, c) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let tally = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let pass = tally.ok() && in_time;
        let limit = c
            .limit
            .map_or(String::new(), |l| format!(" (limit {} s)", l.as_secs()));
        println!(
            "{} {:>2} {}: {tally}; {:.2} s{limit}",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            c.name,
            elapsed.as_secs_f64()
        );
        if !pass {
            failed += 1;
            for f in tally.failures.iter().skip(1) {
                println!("        {f}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        CRITERIA.len() - failed,
        CRITERIA.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
