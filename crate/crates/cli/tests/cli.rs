use std::path::PathBuf;
use std::process::{Command, Output};

use chainlayer_core::Money;
use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_owned()
}

fn chainlayer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chainlayer"))
        .args(args)
        .env_remove("CHAINLAYER_COLOR")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn valid_chain_validates_silently() {
    let out = chainlayer(&["validate", &fixture("illustrative_chain.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "");
    let out = chainlayer(&["validate", &fixture("illustrative_chain.json"), "--verbose"]);
    assert_eq!(stdout(&out), "ok: 15 actors, 14 edges\n");
}

#[test]
fn dangling_edge_is_a_validation_error() {
    let out = chainlayer(&["validate", &fixture("dangling_edge.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("UnknownActor"), "{}", stdout(&out));
    assert_eq!(chainlayer(&["cost", &fixture("dangling_edge.json")]).status.code(), Some(2));
}

#[test]
fn malformed_json_reports_position() {
    let out = chainlayer(&["validate", &fixture("malformed.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 4, column"), "{}", stderr(&out));
}

#[test]
fn missing_file_is_a_parse_error() {
    let out = chainlayer(&["cost", "/nonexistent/chain.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cyclic_chain_fails_layering() {
    let out = chainlayer(&["layers", &fixture("cyclic_chain.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("LayeringInconsistency"), "{}", stderr(&out));
}

#[test]
fn layers_text_matrix() {
    let out = chainlayer(&["layers", &fixture("illustrative_chain.json")]);
    assert_eq!(out.status.code(), Some(0));
    let expected = "\
S3 S2 S1 | M   | D1 D2 D3
A  C  E  | Man | G  N  R
B  D     |     | L  O  S
         |     | M  P
         |     |    Q
";
    assert_eq!(stdout(&out), expected);
}

#[test]
fn manufacturer_only_chain() {
    let out = chainlayer(&["layers", &fixture("manufacturer_only.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("M"));
    let out = chainlayer(&["cost", &fixture("manufacturer_only.json")]);
    assert_eq!(stdout(&out), "total: 12.00\n");
}

#[test]
fn zero_cost_chain_totals_zero() {
    let out = chainlayer(&["cost", &fixture("zero_cost_chain.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "total: 0.00\n");
}

#[test]
fn cost_json_components_sum_to_total() {
    let out = chainlayer(&["cost", &fixture("illustrative_chain.json"), "--json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let obj = v.as_object().unwrap();
    let parse = |s: &Value| s.as_str().unwrap().parse::<Money>().unwrap();
    let sum: Money = obj.iter().filter(|(k, _)| *k != "total").map(|(_, v)| parse(v)).sum();
    assert_eq!(sum, parse(&v["total"]));
    assert_eq!(v["total"], "1765.50");
}

#[test]
fn simulate_prints_what_cost_prints() {
    let chain = fixture("illustrative_chain.json");
    for flags in [&[][..], &["--breakdown"][..], &["--json"][..]] {
        let cost = chainlayer(&[&["cost", chain.as_str()][..], flags].concat());
        let sim = chainlayer(&[&["simulate", chain.as_str()][..], flags].concat());
        assert_eq!(stdout(&cost), stdout(&sim), "{flags:?}");
    }
}

#[test]
fn simulate_writes_trace_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.txt");
    let out = chainlayer(&["simulate", &fixture("illustrative_chain.json"), "--trace", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("1|controller|"), "{first}");
    assert!(text.lines().all(|l| l.split('|').count() == 5));
    assert!(!text.contains('\r'));
}

#[test]
fn compare_text_output() {
    let out = chainlayer(&["compare", &fixture("illustrative_chain.json"), &fixture("usa_center_wins.json")]);
    assert_eq!(out.status.code(), Some(10));
    assert_eq!(
        stdout(&out),
        "baseline: illustrative_chain\nscenario: usa-assembly-center\nCSt1: 1765.50\nCSt2: 1329.50\ndelta: -436.00\ndecision: AdoptScenario\n"
    );
}

#[test]
fn compare_via_agents_agrees() {
    for scen in ["usa_center_wins.json", "usa_center_loses.json", "empty_scenario.json"] {
        let a = chainlayer(&["compare", &fixture("illustrative_chain.json"), &fixture(scen)]);
        let b = chainlayer(&["compare", &fixture("illustrative_chain.json"), &fixture(scen), "--via-agents"]);
        assert_eq!(a.status.code(), b.status.code(), "{scen}");
        assert_eq!(stdout(&a), stdout(&b), "{scen}");
    }
}

#[test]
fn empty_scenario_keeps_baseline() {
    let out = chainlayer(&["compare", &fixture("illustrative_chain.json"), &fixture("empty_scenario.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("delta: 0.00\ndecision: KeepBaseline"));
}

#[test]
fn broken_scenario_is_a_scenario_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"name": "bad", "deltas": [{"type": "remove_actor", "id": "Man"}]}"#).unwrap();
    let out = chainlayer(&["compare", &fixture("illustrative_chain.json"), path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("delta #0"), "{}", stderr(&out));
}

#[test]
fn color_only_when_enabled() {
    let args = ["compare", &fixture("illustrative_chain.json")[..], &fixture("usa_center_wins.json")[..]];
    let plain = chainlayer(&args);
    assert!(!stdout(&plain).contains('\x1b'));
    let colored = Command::new(env!("CARGO_BIN_EXE_chainlayer")).args(args).env("CHAINLAYER_COLOR", "1").output().unwrap();
    assert!(stdout(&colored).contains('\x1b'));
    let json = Command::new(env!("CARGO_BIN_EXE_chainlayer"))
        .args(args)
        .arg("--json")
        .env("CHAINLAYER_COLOR", "1")
        .output()
        .unwrap();
    assert!(!stdout(&json).contains('\x1b'));
}
