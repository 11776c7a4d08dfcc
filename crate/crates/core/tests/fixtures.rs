use abmd::fixtures::{fixture_dir, Thresholds, FIXTURES_ENV, THRESHOLDS_FILE};

// the only test in this binary, so changing the environment is safe
#[test]
fn environment_overrides_fixture_directory() {
    let shipped = Thresholds::load().unwrap();
    assert!(shipped.get("manufactured_roundtrip").unwrap() > 0.0);
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join(THRESHOLDS_FILE), "manufactured_roundtrip 1e-3\n").unwrap();
    std::env::set_var(FIXTURES_ENV, dir.path());
    assert_eq!(fixture_dir(), dir.path());
    let overridden = Thresholds::load().unwrap();
    assert_eq!(overridden.get("manufactured_roundtrip").unwrap(), 1e-3);
    assert!(overridden.get("manufactured_forward_k8").is_err());
    std::env::remove_var(FIXTURES_ENV);
}
