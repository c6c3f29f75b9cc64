use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn commforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commforge"))
        .args(args)
        .env_remove("COMMFORGE_LIMITS")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&o.stdout)))
}

fn fixture() -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/fig5.json").to_string_lossy().into_owned()
}

#[test]
fn member_exit_codes() {
    assert_eq!(code(&commforge(&["member", "--word", "[[x,y],y^-1]", "--depth", "3"])), 0);
    assert_eq!(code(&commforge(&["member", "--word", "x", "--depth", "2"])), 1);
    let bad = commforge(&["member", "--word", "[x,", "--depth", "2"]);
    assert_eq!(code(&bad), 2);
    assert!(!bad.stderr.is_empty());
    assert_eq!(code(&commforge(&["member", "--word", "x", "--depth", "0"])), 2);
    assert_eq!(code(&commforge(&["member", "--depth", "2"])), 2);
}

#[test]
fn member_prints_a_bool() {
    let o = commforge(&["member", "--word", "[x,y]", "--depth", "2"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "true");
    let o = commforge(&["member", "--word", "[x,y]", "--depth", "2", "--json"]);
    assert_eq!(json(&o)["result"]["member"], true);
}

#[test]
fn decompose_text_and_json() {
    let o = commforge(&["decompose", "--word", "[x,y]", "--depth", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "[x, y]");

    let o = commforge(&["decompose", "--word", "[x,y z]", "--depth", "2", "--json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let factors = v["result"]["factors"].as_array().unwrap();
    assert!(!factors.is_empty());
    assert!(factors.iter().all(|f| f["length"].as_u64().unwrap() >= 2));

    assert_eq!(code(&commforge(&["decompose", "--word", "x y", "--depth", "2"])), 1);
}

#[test]
fn witness_examples() {
    let o = commforge(&["witness", "--word", "[x,y]", "--n", "1", "--verify"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["sets"], serde_json::json!([[0, 2], [1, 3]]));
    assert_eq!(v["result"]["verified"], true);

    let o = commforge(&["witness", "--word", "x", "--n", "1"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not certified in F^(2)"));

    let o = commforge(&["witness", "--word", "[[x,y],y^-1]", "--n", "2", "--verify"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["sets"].as_array().unwrap().len(), 3);
    assert_eq!(v["result"]["verified"], true);
}

#[test]
fn witness_of_a_product_goes_through_decomposition() {
    let o = commforge(&["witness", "--word", "[x,y][y,z]", "--n", "1", "--verify"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["source"], "decomposition");
    assert_eq!(v["result"]["freely_equal_to_input"], true);
    assert_eq!(v["result"]["verified"], true);
}

#[test]
fn surface_examples() {
    let f = fixture();
    let o = commforge(&["surface", "check", "--file", &f, "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["outcome"], "certified");

    let o = commforge(&["surface", "check", "--file", &f, "--n", "3"]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["outcome"], "refused");

    let o = commforge(&["surface", "bounds", "--file", &f, "--n", "2"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["result"]["l_n_s"], -1);
    assert_eq!(v["result"]["curves"][0]["k"], 1);
    assert_eq!(v["result"]["curves"][0]["q_gamma"], 0);

    let o = commforge(&["surface", "check", "--file", &f, "--n", "2", "--search"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn surface_input_errors() {
    assert_eq!(code(&commforge(&["surface", "check", "--file", "/nonexistent.json", "--n", "2"])), 2);
    let f = fixture();
    assert_eq!(code(&commforge(&["surface", "check", "--file", &f, "--n", "2", "--ordering", "1,q"])), 2);
    assert_eq!(code(&commforge(&["surface", "check", "--file", &f, "--n", "2", "--ordering", "1", "--search"])), 2);
    assert_eq!(code(&commforge(&["surface", "lint", "--file", &f, "--band", "gamma9"])), 2);
}

#[test]
fn reports_are_reproducible() {
    let f = fixture();
    let runs = [
        vec!["surface", "check", "--file", f.as_str(), "--n", "2"],
        vec!["surface", "bounds", "--file", f.as_str(), "--n", "2"],
        vec!["decompose", "--word", "[[x,y],z][y,z]", "--depth", "2", "--json"],
        vec!["witness", "--word", "[[x,y],y^-1]", "--n", "2", "--verify"],
    ];
    for args in runs {
        let a = commforge(&args);
        let b = commforge(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v = json(&a);
        assert_eq!(v["tool"], "commforge");
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(v["input_digest"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn timing_stays_on_stderr() {
    let args = ["member", "--word", "[x,y]", "--depth", "2", "--json", "--timing"];
    let o = commforge(&args);
    assert!(String::from_utf8_lossy(&o.stderr).contains("elapsed"));
    assert!(!String::from_utf8_lossy(&o.stdout).contains("elapsed"));
}

#[test]
fn limits_from_the_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_commforge"))
        .args(["member", "--word", "[x,y]", "--depth", "2"])
        .env("COMMFORGE_LIMITS", "monomial_limit=nope")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
    let args = ["member", "--word", "[[x,y],z]", "--depth", "3"];
    assert_eq!(code(&commforge(&args)), 0);
    let o = Command::new(env!("CARGO_BIN_EXE_commforge"))
        .args(args)
        .env("COMMFORGE_LIMITS", "monomial_limit=5")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn selftest_passes() {
    let o = commforge(&["selftest", "--cases", "10"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&commforge(&["--help"])), 0);
    assert_eq!(code(&commforge(&["--version"])), 0);
    assert_eq!(code(&commforge(&["frobnicate"])), 2);
}
