use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use gmk_core::triple::{EigenScalar, TripleEigenData, TripleWeights};
use gmk_core::{Basis, NearlyForm, Padic, WeightChar};
use serde_json::Value;

fn gmk() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gmk"));
    c.env_remove("GMK_DEFAULT_PREC");
    c
}

fn run(args: &[&str]) -> Output {
    gmk().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = gmk().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn form_json(p: u32, k: i64, basis: Basis, terms: &[(u32, u64, i64)]) -> String {
    let f = NearlyForm::from_terms(
        WeightChar::power(p, k),
        0,
        1,
        basis,
        30,
        terms.iter().map(|&(m, nu, a)| (m, nu, Padic::from_int(p, a, 10))),
    )
    .unwrap();
    serde_json::to_string(&f).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn weights_eval_classical_power() {
    let v = json(&run(&["weights", "eval", "--char", "2", "--beta", "4"]));
    assert!(v.to_string().contains("\"16\""), "{v}");
}

#[test]
fn deplete_kills_p_divisible_terms() {
    // (1+q)^3 at p = 3
    let input = form_json(3, 2, Basis::V, &[(0, 3, 1)]);
    let v = json(&run_stdin(&["qexp", "apply", "--op", "deplete"], &input));
    assert_eq!(v["grid"], Value::Array(vec![]));
}

#[test]
fn outputs_feed_back_in() {
    let input = form_json(5, 2, Basis::W, &[(0, 1, 1), (0, 2, 3)]);
    let once = run_stdin(&["qexp", "apply", "--op", "nabla"], &input);
    let twice = run_stdin(&["qexp", "apply", "--op", "nabla"], &String::from_utf8(once.stdout).unwrap());
    let pow = run_stdin(&["qexp", "apply", "--op", "nabla-pow", "--s", "2"], &input);
    let a: NearlyForm<Padic> = serde_json::from_value(json(&twice)).unwrap();
    let b: NearlyForm<Padic> = serde_json::from_value(json(&pow)).unwrap();
    assert!(a.approx_eq(&b));
}

#[test]
fn triple_product_of_constants() {
    let dir = tempfile::tempdir().unwrap();
    let one = form_json(3, 2, Basis::W, &[(0, 0, 1)]);
    let a = write(dir.path(), "a.json", &one);
    let b = write(dir.path(), "b.json", &one);
    let v = json(&run(&["triple", "t", "--weights", "2,2,4", "--in", a.to_str().unwrap(), b.to_str().unwrap()]));
    let t: NearlyForm<Padic> = serde_json::from_value(v).unwrap();
    assert_eq!(t.classical_weight(), Some(4));
    assert!((t.coeff(0, 0).unwrap().clone() - &Padic::from_int(3, 2, 10)).is_zero());
}

#[test]
fn gm_iterate_at_a_classical_exponent() {
    let input = form_json(3, 2, Basis::V, &[(0, 1, 1), (0, 2, 1)]);
    let v = json(&run_stdin(&["gm", "iterate", "--s", "2"], &input));
    assert_eq!(v["tail_floor"], Value::Null);
    assert!(!v["pieces"].as_array().unwrap().is_empty());
}

#[test]
fn binom_lemma_suite() {
    let o = run(&["verify", "binom-lemma", "--i-max", "6", "--subs", "50"]);
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["cases"].as_array().unwrap().len(), 7);
}

#[test]
fn passing_suites_exit_zero() {
    assert_eq!(run(&["verify", "univ-char", "--p", "3", "--n", "1", "--cases", "3"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "gmesp", "--p", "3", "--m", "2", "--cases", "2"]).status.code(), Some(0));
    assert_eq!(run(&["triple", "verify-theta", "--cases", "2"]).status.code(), Some(0));
}

#[test]
fn divisibility_suite_reports_failures() {
    let o = run(&["gm", "verify", "pdiviter", "--cases", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert!(!v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn unknown_suite_exits_two() {
    let o = run(&["verify", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn malformed_json_names_the_line() {
    let o = run_stdin(&["qexp", "apply", "--op", "derive"], "{\n  \"weight\": \n  oops }");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn environment_sets_the_default_precision() {
    let o = gmk().env("GMK_DEFAULT_PREC", "5").args(["verify", "euler", "--cases", "2"]).output().unwrap();
    assert_eq!(json(&o)["prec"], 5);
    let o = gmk().env("GMK_DEFAULT_PREC", "5").args(["--prec", "7", "verify", "euler", "--cases", "2"]).output().unwrap();
    assert_eq!(json(&o)["prec"], 7);
    let o = gmk().env("GMK_DEFAULT_PREC", "zero").args(["verify", "euler"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_and_can_go_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["verify", "delta-homogeneity", "--cases", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let again = run(&["verify", "delta-homogeneity", "--cases", "3"]);
    assert_eq!(fs::read(&out).unwrap(), again.stdout);
}

#[test]
fn euler_from_a_data_file() {
    let base = |a: i64| EigenScalar::Base(Padic::from_int(5, a, 10));
    let d = TripleEigenData {
        p: 5,
        weights: TripleWeights::new(2, 2, 2).unwrap(),
        alpha_x: base(1),
        beta_x: base(1),
        alpha_y: base(1),
        beta_y: base(2),
        alpha_z: base(1),
        beta_z: base(25),
    };
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "d.json", &serde_json::to_string(&d).unwrap());
    let v = json(&run(&["euler", "--data", path.to_str().unwrap()]));
    assert_eq!(v["m0"], 3);
    assert_eq!(v["exceptional"], true);
    let v = json(&run(&["euler", "--data", path.to_str().unwrap(), "--other", "2,2,2;4,2,2"]));
    assert_eq!(v["m_p"], serde_json::json!([3, 4]));
    assert_eq!(run(&["euler", "--data", path.to_str().unwrap(), "--other", "2,2,1"]).status.code(), Some(2));
}

/// Top-level keys of `v` against the `required` and `properties` of a schema
/// in docs/schemas.
fn conforms(v: &Value, schema: &str) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(schema);
    let s: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let obj = v.as_object().unwrap();
    let props = s["properties"].as_object().unwrap();
    for r in s["required"].as_array().unwrap() {
        assert!(obj.contains_key(r.as_str().unwrap()), "{schema}: missing {r}");
    }
    for k in obj.keys() {
        assert!(props.contains_key(k), "{schema}: unexpected {k}");
    }
}

#[test]
fn outputs_match_the_schemas() {
    conforms(&json(&run(&["weights", "eval", "--char", "2", "--beta", "4"])), "padic.json");
    let input = form_json(3, 2, Basis::V, &[(0, 1, 1)]);
    let f = json(&run_stdin(&["qexp", "apply", "--op", "nabla"], &input));
    conforms(&f, "nearly-form.json");
    conforms(&f["weight"], "weight-char.json");
    let it = json(&run_stdin(&["gm", "iterate", "--s", r#"{"p":3,"n":1,"class":0}"#, "--prec", "3"], &input));
    conforms(&it, "gm-iterate-output.json");
    conforms(&it["s"], "exponent-spec.json");
    conforms(&it["pieces"][0]["form"]["grid"][0]["coeff"], "iwasawa-series.json");
    conforms(&json(&run(&["verify", "euler", "--cases", "1"])), "verify-report.json");
}
