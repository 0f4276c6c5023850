use refbloch::fixtures::{
    encode, generate, load, render, shipped_not_found, verify_shipped, RATIONAL_BUNDLE,
    TOWER_BUNDLE,
};
use refbloch_core::certifier::SearchConfig;
use refbloch_core::field::{Rational, TowerElement};

#[test]
fn shipped_certificates_verify() {
    let results = verify_shipped().unwrap();
    assert!(results.len() > 50);
    for (name, ok) in results {
        assert!(ok, "{name}");
    }
}

#[test]
fn bundles_re_encode_identically() {
    let tower = load::<TowerElement>(TOWER_BUNDLE).unwrap();
    let missing: Vec<(String, String)> = Vec::new();
    assert_eq!(render(&encode(&tower, &missing).unwrap()), TOWER_BUNDLE);
    let doc: serde_json::Value = serde_json::from_str(RATIONAL_BUNDLE).unwrap();
    let missing: Vec<(String, String)> = doc["not_found"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            (
                e["name"].as_str().unwrap().into(),
                e["reason"].as_str().unwrap().into(),
            )
        })
        .collect();
    let rational = load::<Rational>(RATIONAL_BUNDLE).unwrap();
    assert_eq!(
        render(&encode(&rational, &missing).unwrap()),
        RATIONAL_BUNDLE
    );
}

#[test]
fn tower_bundle_regenerates_from_search() {
    let fresh = render(&generate::<TowerElement>(&SearchConfig::default()).unwrap());
    assert_eq!(fresh, TOWER_BUNDLE);
    assert!(shipped_not_found::<TowerElement>().is_empty());
}

#[test]
fn rational_bundle_records_what_the_search_misses() {
    let missing = shipped_not_found::<Rational>();
    assert!(
        missing.iter().any(|n| n == "psi2-additivity(2,3)"),
        "{missing:?}"
    );
}
