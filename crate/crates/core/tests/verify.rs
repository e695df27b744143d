use gmk_core::config::{min_terms, RunConfig};
use gmk_core::report::{CaseResult, VerifyReport};
use gmk_core::verify::{run_suite, SUITES};
use gmk_core::Error;

fn small(p: u32, cases: usize) -> RunConfig {
    RunConfig { p, cases, prec: 6, ..RunConfig::default() }
}

#[test]
fn same_seed_gives_identical_reports() {
    for suite in ["theta-chi", "gm-step", "euler", "delta-homogeneity"] {
        let a = serde_json::to_string(&run_suite(suite, &small(5, 4)).unwrap()).unwrap();
        let b = serde_json::to_string(&run_suite(suite, &small(5, 4)).unwrap()).unwrap();
        assert_eq!(a, b, "{suite}");
    }
}

#[test]
fn different_seeds_draw_different_cases() {
    let a = run_suite("gm-step", &small(3, 4)).unwrap();
    let b = run_suite("gm-step", &RunConfig { seed: 7, ..small(3, 4) }).unwrap();
    assert_ne!(a.cases, b.cases);
}

#[test]
fn cases_are_sorted_by_descriptor() {
    let r = run_suite("euler", &small(3, 6)).unwrap();
    assert!(r.cases.windows(2).all(|w| w[0].descriptor <= w[1].descriptor));
}

#[test]
fn unknown_suite_is_an_error() {
    let e = run_suite("no-such-suite", &RunConfig::default()).unwrap_err();
    assert!(matches!(e, Error::Invalid(_)));
    assert!(!SUITES.contains(&"no-such-suite"));
}

#[test]
fn exit_code_follows_the_cases() {
    let cfg = RunConfig::default();
    let ok = VerifyReport::new("x", &cfg, vec![CaseResult::new("a", true)]);
    let bad = VerifyReport::new("x", &cfg, vec![CaseResult::new("b", false), CaseResult::new("a", true)]);
    assert_eq!(ok.exit_code(), 0);
    assert_eq!(bad.exit_code(), 1);
    assert_eq!(bad.failures, vec!["b".to_string()]);
}

#[test]
fn config_validation() {
    assert!(RunConfig::default().validate().is_ok());
    assert!(RunConfig { p: 2, ..RunConfig::default() }.validate().is_err());
    assert!(RunConfig { n: 0, ..RunConfig::default() }.validate().is_err());
    assert!(RunConfig { trunc: Some(0), ..RunConfig::default() }.validate().is_err());
    let need = min_terms(3, 8);
    assert_eq!(need, 6);
    assert!(RunConfig { terms: Some(need - 1), ..RunConfig::default() }.validate().is_err());
    assert!(RunConfig { terms: Some(need), ..RunConfig::default() }.validate().is_ok());
}

#[test]
fn small_suites_pass() {
    for suite in ["univ-char", "theta-chi", "gm-step", "binom-lemma", "theta-m", "delta-homogeneity", "euler"] {
        let cfg = RunConfig { i_max: Some(4), subs: 50, ..small(3, 3) };
        let r = run_suite(suite, &cfg).unwrap();
        assert!(r.pass, "{suite}: {:?}", r.failures);
    }
}

#[test]
fn report_json_shape() {
    let r = run_suite("binom-lemma", &RunConfig { i_max: Some(2), subs: 5, ..RunConfig::default() }).unwrap();
    let v = serde_json::to_value(&r).unwrap();
    for key in ["suite", "p", "n", "prec", "seed", "cases", "failures", "pass"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let back: VerifyReport = serde_json::from_value(v).unwrap();
    assert_eq!(back, r);
}
