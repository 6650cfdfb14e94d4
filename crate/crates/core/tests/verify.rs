use emfd_core::rng::{Lcg, DEFAULT_SEED};
use emfd_core::verify::{random_bundle, random_quasi, run, run_all, SUITES};

#[test]
fn all_suites_pass_and_repeat_exactly() {
    let a = run_all(DEFAULT_SEED);
    for s in &a.suites {
        assert!(s.pass, "{}: {:?}", s.suite, s.counterexamples);
    }
    assert_eq!(a.suites.len(), SUITES.len());
    let b = run_all(DEFAULT_SEED);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn a_suite_alone_matches_its_slot_in_all() {
    let all = run_all(11);
    for (i, name) in SUITES.iter().enumerate() {
        assert_eq!(run(name, 11).unwrap(), all.suites[i]);
    }
}

#[test]
fn seeds_change_the_instance_stream() {
    let draw = |seed| {
        let mut r = Lcg::new(seed);
        (0..5).map(|_| random_quasi(&mut r).unwrap().sign_x).collect::<Vec<_>>()
    };
    assert_eq!(draw(1), draw(1));
    assert_ne!(draw(1), draw(2));
    let mut r = Lcg::new(DEFAULT_SEED);
    for _ in 0..20 {
        random_bundle(&mut r).unwrap();
    }
}
