use bellkit::io::{behavior_from_json, behavior_to_json, read_behavior, write_behavior, CoefficientsFile};
use bellkit::random::{random_behavior, trial_rng};
use bellkit_core::coefficients::CoefficientSet;
use bellkit_core::Scenario;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn behavior_json_roundtrip_is_bit_exact(n in 2usize..=3, m in 2usize..=3, d in 2usize..=4, seed in any::<u64>()) {
        let s = Scenario::new(n, m, d).unwrap();
        let b = random_behavior(&s, &mut trial_rng(seed, 0));
        let back = behavior_from_json(&behavior_to_json(&b).unwrap()).unwrap();
        prop_assert_eq!(back, b);
    }
}

#[test]
fn behavior_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("b.json");
    let s = Scenario::new(2, 3, 3).unwrap();
    let b = random_behavior(&s, &mut trial_rng(5, 1));
    write_behavior(&path, &b).unwrap();
    assert_eq!(read_behavior(&path).unwrap(), b);
}

#[test]
fn invalid_probabilities_rejected() {
    let bad = r#"{"N":2,"m":2,"d":2,"p":[1.5,-0.5,0,0, 1,0,0,0, 1,0,0,0, 1,0,0,0]}"#;
    assert!(behavior_from_json(bad).is_err());
    let unnormalized = r#"{"N":2,"m":2,"d":2,"p":[0.5,0,0,0, 1,0,0,0, 1,0,0,0, 1,0,0,0]}"#;
    assert!(behavior_from_json(unnormalized).is_err());
    assert!(behavior_from_json(r#"{"N":1,"m":2,"d":2,"p":[]}"#).is_err());
}

#[test]
fn coefficients_file_reports_consistency() {
    let s = Scenario::new(3, 3, 4).unwrap();
    let f = CoefficientsFile::new(&CoefficientSet::new(&s));
    assert_eq!(f.alpha.len(), 2);
    assert_eq!(f.alpha_hat.len(), 4);
    assert_eq!(f.a_k.len(), 3);
    assert!(f.consistency_max_residual < 1e-12);
}
