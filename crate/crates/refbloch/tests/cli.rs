use std::path::PathBuf;
use std::process::{Command, Output};

fn refbloch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_refbloch"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("refbloch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn eval_squares_a_radical() {
    let o = refbloch(&["eval", "sqrt(2)*sqrt(2)"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "2\n");
}

#[test]
fn eval_rejects_malformed_input_with_usage_code() {
    assert_eq!(refbloch(&["eval", "2+"]).status.code(), Some(2));
    assert_eq!(refbloch(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn rational_backend_refuses_irrational_roots() {
    let o = refbloch(&["--backend", "rational", "eval", "sqrt(2)"]);
    assert_ne!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&refbloch(&["--backend", "rational", "eval", "sqrt(9/4)"])),
        "3/2\n"
    );
}

#[test]
fn certificate_round_trips_through_files() {
    let (claim, cert) = (scratch("claim.json"), scratch("cert.json"));
    let (c, k) = (claim.to_str().unwrap(), cert.to_str().unwrap());
    let o = refbloch(&[
        "certify",
        "psi-swap",
        "--x",
        "-1",
        "--y",
        "2",
        "--index",
        "2",
        "--claim-out",
        c,
        "--cert-out",
        k,
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("PROVED"));
    let o = refbloch(&["check-cert", c, k]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PROVED"));
}

#[test]
fn tampered_certificate_fails() {
    let (claim, cert) = (scratch("claim-t.json"), scratch("cert-t.json"));
    let (c, k) = (claim.to_str().unwrap(), cert.to_str().unwrap());
    let o = refbloch(&[
        "certify",
        "c-constant",
        "--x",
        "2",
        "--y",
        "3",
        "--claim-out",
        c,
        "--cert-out",
        k,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    doc["terms"].as_array_mut().unwrap().pop();
    std::fs::write(&cert, doc.to_string()).unwrap();
    let o = refbloch(&["check-cert", c, k]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn refute_reports_a_false_claim() {
    let claim = scratch("false.json");
    let doc = serde_json::json!({ "label": "[2] = 0", "target": [["2", [[{ "sign": "+", "primes": [] }, "1"]]]] });
    std::fs::write(&claim, doc.to_string()).unwrap();
    let o = refbloch(&["--backend", "rational", "refute", claim.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("REFUTED"));
}

#[test]
fn configuration_commands() {
    assert_eq!(
        stdout(&refbloch(&["--backend", "rational", "d1", "2"])),
        "(-<1> + <2> + <-1> - <-2>)[]\n"
    );
    assert_eq!(
        stdout(&refbloch(&["boundary", "0", "1", "inf"])),
        "(0, 1) - (0, inf) + (1, inf)\n"
    );
    let o = refbloch(&["canonicalize", "inf", "0", "1", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "<-1> [1/5]\n");
}

#[test]
fn milnor_commands() {
    assert_eq!(stdout(&refbloch(&["km-reduce", "-2", "-3"])), "{-1, -1}\n");
    assert_eq!(stdout(&refbloch(&["km-reduce", "1/3", "2/3"])), "ZERO\n");
    assert_eq!(
        refbloch(&["--backend", "rational", "km-halve", "2"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn suite_json_is_reproducible_and_writes_files() {
    let out = scratch("report.json");
    let args = [
        "--seed",
        "3",
        "--samples",
        "2",
        "--format",
        "json",
        "run-suite",
        "--out",
        out.to_str().unwrap(),
    ];
    assert_eq!(refbloch(&args).status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(refbloch(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read_to_string(&out).unwrap());
    let report: serde_json::Value = serde_json::from_str(&first).unwrap();
    assert_eq!(report["entries"].as_array().unwrap().len(), 9);
    assert!(report["entries"][0].get("elapsed_ms").is_none());
}
