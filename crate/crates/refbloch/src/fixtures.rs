//! Search-discovered certificates shipped with the crate, one bundle per backend.

use serde_json::{json, Value};

use refbloch_core::certifier::{
    check_certificate, Certificate, IdentityClaim, LocalStore, Prover, SearchConfig,
};
use refbloch_core::field::{BackendKind, Field, Rational, TowerElement};

use crate::catalog::{failure_reason, fixture_runs};
use crate::json::{
    element_to_json, group_ring_to_json, joint_context, rp_element_to_json, JsonError, JsonField,
    JsonResult, Session,
};

pub const TOWER_BUNDLE: &str = include_str!("../fixtures/tower.json");
pub const RATIONAL_BUNDLE: &str = include_str!("../fixtures/rational.json");

pub const BUNDLE_SCHEMA: u64 = 1;

pub fn shipped<F: Field>() -> &'static str {
    match F::KIND {
        BackendKind::Tower => TOWER_BUNDLE,
        BackendKind::Rational => RATIONAL_BUNDLE,
    }
}

pub fn bundle_file_name(kind: BackendKind) -> &'static str {
    match kind {
        BackendKind::Tower => "tower.json",
        BackendKind::Rational => "rational.json",
    }
}

pub struct FixtureProof<F: Field> {
    pub name: String,
    pub claim: IdentityClaim<F>,
    pub certificate: Certificate<F>,
}

/// Decode a bundle, each proof in a fresh session primed with its context.
pub fn load<F: JsonField>(text: &str) -> JsonResult<Vec<FixtureProof<F>>> {
    let doc: Value = serde_json::from_str(text)?;
    let proofs = doc
        .get("proofs")
        .and_then(Value::as_array)
        .ok_or_else(|| JsonError::Shape {
            path: "proofs".into(),
            message: "expected an array".into(),
        })?;
    proofs
        .iter()
        .map(|p| {
            let name = p
                .get("name")
                .and_then(Value::as_str)
                .unwrap_or_default()
                .to_string();
            let mut session: Session<F> = Session::default();
            if let Some(ctx) = p.get("context") {
                session.prime(ctx, "context")?;
            }
            Ok(FixtureProof {
                name,
                claim: session.claim(&p["claim"])?,
                certificate: session.certificate(&p["certificate"])?,
            })
        })
        .collect()
}

/// `(name, passes)` for every proof in the bundle.
pub fn verify<F: JsonField>(proofs: &[FixtureProof<F>]) -> JsonResult<Vec<(String, bool)>> {
    proofs
        .iter()
        .map(|p| Ok((p.name.clone(), check_certificate(&p.claim, &p.certificate)?)))
        .collect()
}

fn certificate_terms<F: JsonField>(cert: &Certificate<F>) -> Value {
    Value::Array(
        cert.terms()
            .iter()
            .map(|t| json!({ "coefficient": group_ring_to_json::<F>(&t.coefficient), "x": element_to_json(&t.x), "y": element_to_json(&t.y) }))
            .collect(),
    )
}

/// Encode proofs as a bundle; `missing` lists runs the search could not certify.
pub fn encode<F: JsonField>(
    proofs: &[FixtureProof<F>],
    missing: &[(String, String)],
) -> JsonResult<Value> {
    let proofs = proofs
        .iter()
        .map(|p| {
            let elements = p
                .claim
                .target
                .support()
                .chain(p.certificate.terms().iter().flat_map(|t| [&t.x, &t.y]));
            let ctx = joint_context(elements)?;
            Ok(json!({
                "name": p.name,
                "context": F::context_radicands(&ctx).iter().map(element_to_json).collect::<Vec<_>>(),
                "claim": { "label": p.claim.label, "target": rp_element_to_json(&p.claim.target) },
                "certificate": certificate_terms(&p.certificate),
            }))
        })
        .collect::<JsonResult<Vec<_>>>()?;
    Ok(json!({
        "schema": BUNDLE_SCHEMA,
        "backend": F::KIND.name(),
        "proofs": proofs,
        "not_found": missing.iter().map(|(name, reason)| json!({ "name": name, "reason": reason })).collect::<Vec<_>>(),
    }))
}

/// Pretty JSON with a trailing newline, the on-disk form.
pub fn render(bundle: &Value) -> String {
    let mut s = serde_json::to_string_pretty(bundle).expect("JSON values serialize");
    s.push('\n');
    s
}

/// Run every catalogued tactic from scratch and bundle the results.
pub fn generate<F: JsonField>(config: &SearchConfig) -> JsonResult<Value> {
    let store = LocalStore::<F>::default();
    let prover = Prover::new(config.clone(), &store);
    let mut proofs = Vec::new();
    let mut missing = Vec::new();
    for (name, run) in fixture_runs(&prover) {
        match run {
            Ok(p) => proofs.push(FixtureProof {
                name,
                claim: p.claim,
                certificate: p.certificate,
            }),
            Err(e) => missing.push((name, failure_reason(&e))),
        }
    }
    encode(&proofs, &missing)
}

/// Names recorded as not found in the shipped bundle.
pub fn shipped_not_found<F: Field>() -> Vec<String> {
    let doc: Value = serde_json::from_str(shipped::<F>()).unwrap_or(Value::Null);
    doc.get("not_found")
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(|e| e.get("name").and_then(Value::as_str).map(String::from))
                .collect()
        })
        .unwrap_or_default()
}

/// Both shipped bundles decode and every certificate checks.
pub fn verify_shipped() -> JsonResult<Vec<(String, bool)>> {
    let mut out = Vec::new();
    for (name, ok) in verify(&load::<TowerElement>(TOWER_BUNDLE)?)? {
        out.push((format!("tower/{name}"), ok));
    }
    for (name, ok) in verify(&load::<Rational>(RATIONAL_BUNDLE)?)? {
        out.push((format!("rational/{name}"), ok));
    }
    Ok(out)
}
