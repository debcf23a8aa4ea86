use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn hyperalg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperalg"))
        .args(args)
        .env_remove("HYPERALG_PRIME")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hyperalg(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(stdout(args).lines().next().unwrap()).unwrap()
}

#[test]
fn fuss_catalan_prints_plain_integer() {
    assert_eq!(stdout(&["fuss-catalan", "5"]), "3\n");
    assert_eq!(stdout(&["fuss-catalan", "11"]), "273\n");
}

#[test]
fn span_record_embeds_config() {
    let v = json(&["span", "--formulation", "second", &fixture("thm32_A1.hmx")]);
    assert_eq!(v["dim"], 8);
    assert_eq!(v["config"]["formulation"], "second");
    assert_eq!(v["config"]["convention"], "literal");
    assert_eq!(v["config"]["seed"], 0);
}

#[test]
fn ch_record_shape() {
    let v = json(&["ch", &fixture("thm32_A0.hmx")]);
    for key in ["formulation", "convention", "backend", "r", "alphas"] {
        assert!(!v[key].is_null(), "missing {key}");
    }
    assert_eq!(v["r"], 1);
}

#[test]
fn operation_error_is_one_json_line() {
    let out = hyperalg(&["tetra", &fixture("thm31_A1.hmx")]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    let v: Value = serde_json::from_str(&err).unwrap();
    assert_eq!(v["error"]["command"], "tetra");
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_with_usage_text() {
    let out = hyperalg(&["bench", "--workload", "product", "--repetitions", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("repetitions"));
    assert_eq!(hyperalg(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(hyperalg(&["span", "--no-such-flag", "x"]).status.code(), Some(2));
}

#[test]
fn bench_asserts_equality_and_reports_timings() {
    let v = json(&["bench", "--workload", "product", "--size", "4", "--repetitions", "2"]);
    assert_eq!(v["equal"], true);
    assert!(v["kernel_ms"]["min"].as_f64().unwrap() <= v["kernel_ms"]["median"].as_f64().unwrap());
    let v = json(&["bench", "--workload", "span", "--size", "3", "--repetitions", "1"]);
    assert_eq!(v["dim"], 27);
}

#[test]
fn out_flag_and_prime_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("inflated.hmx");
    let p = path.display().to_string();
    let out = Command::new(env!("CARGO_BIN_EXE_hyperalg"))
        .args(["--backend", "modp", "--out", &p, "inflate", "--undirected", &fixture("k14.edges")])
        .env("HYPERALG_PRIME", "101")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert!(fs::read_to_string(&path).unwrap().contains("backend modp 101"));
}

#[test]
fn duplicate_edges_warn_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dup.edges");
    fs::write(&path, "n 3\n0 1\n0 1\n").unwrap();
    let out = hyperalg(&["inflate", &path.display().to_string()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("duplicate edge"));
}

#[test]
fn version_embeds_fixture_hash() {
    let v = stdout(&["--version"]);
    assert!(v.contains(&hyperalg_core::fixtures::fixture_set_hash()), "{v}");
}
