use tstruct_core::suites::{resolve_suite, run_suite, suite_ids, SuiteConfig};

fn assert_suite(id: &str) {
    let report = run_suite(id, &SuiteConfig::default()).expect("suite runs");
    assert!(report.tally.checked > 0, "{id} checked nothing");
    assert!(report.passed(), "{id}: {} failures, e.g. {:?}", report.tally.failed, report.tally.examples);
}

#[test]
fn spectrum_invariants() {
    assert_suite("spectrum");
}

#[test]
fn filtration_invariants() {
    assert_suite("filtration");
}

#[test]
fn zmodule_invariants() {
    assert_suite("zmodules");
}

#[test]
fn truncation_invariants() {
    assert_suite("derived");
}

#[test]
fn groups_expand_to_known_suites() {
    let ids = suite_ids();
    assert_eq!(resolve_suite("all").unwrap(), ids);
    for group in ["duality", "truncation", "orthogonality", "oracle", "3", "criterion7"] {
        for id in resolve_suite(group).unwrap() {
            assert!(ids.contains(&id), "{group} expands to unknown {id}");
        }
    }
    assert!(resolve_suite("criterion10").is_err());
}
