mod common;

use common::*;
use serde_json::Value;

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    all.push("--json".into());
    let (code, stdout, _) = run_in_process(&all);
    (code, serde_json::from_str(&stdout).unwrap_or(Value::Null))
}

#[test]
fn golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatched = Vec::new();
    for case in golden_cases() {
        let got = golden_transcript(&case, run_in_process);
        let path = golden_path(&case.name);
        if update {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_default();
        if got != want {
            mismatched.push(case.name);
        }
    }
    assert!(mismatched.is_empty(), "golden mismatches: {mismatched:?}");
}

#[test]
fn frobenius_on_the_plane() {
    let (code, v) = run_json(&["frobenius", "tests/fixtures/p2.json", "--p", "3", "--e", "1"]);
    assert_eq!(code, 0);
    let r = &v["results"];
    assert_eq!(r["total_rank"], 9);
    let summands: Vec<(i64, u64)> = r["summands"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["class"][0].as_i64().unwrap(), s["multiplicity"].as_u64().unwrap()))
        .collect();
    assert_eq!(summands, vec![(-2, 1), (-1, 7), (0, 1)]);
}

#[test]
fn quadric_canonical_class() {
    let (code, v) = run_json(&["canonical", "tests/fixtures/quadric.json"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["principal"], true);
    assert_eq!(v["results"]["class"]["torsion"][0], 0);
}

#[test]
fn z2_action_is_small() {
    let (code, v) = run_json(&["action", "small", "--group", "2", "--weights", "1;1"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["small"], true);
}

#[test]
fn report_keys_in_order() {
    let (_, v) = run_json(&["veronese", "--n", "4", "--d", "2"]);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["command", "inputs", "results", "warnings"]);
}

#[test]
fn exit_codes() {
    let (code, v) = run_json(&["frobenius", "tests/fixtures/twisted_cubic.json", "--p", "2", "--e", "1"]);
    assert_eq!(code, 1);
    assert_eq!(v["results"], Value::Null);
    assert_eq!(v["error"]["kind"], "torsion_class_group");

    let (code, v) = run_json(&["frobenius", "tests/fixtures/p2.json", "--p", "7", "--e", "3", "--cap", "10"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "cap_exceeded");

    for args in [
        &["classgroup", "tests/fixtures/nope.json"][..],
        &["classgroup", "tests/fixtures/malformed.json"],
        &["frobenius", "tests/fixtures/p2.json", "--p", "x", "--e", "1"],
        &["height", "--supports", "1,9", "--nvars", "3"],
        &["action", "small", "--group", "0", "--weights", "1"],
        &["action", "small", "--group", "3", "--weights", "1,1"],
        &["surjcheck", "--weights", "1;1,2", "--sigma", "1", "--bound", "2"],
        &["classgroup", "tests/fixtures/p2.json", "--threads", "0"],
    ] {
        let owned: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let (code, stdout, stderr) = run_in_process(&owned);
        assert_eq!(code, 2, "{args:?}");
        assert!(stdout.is_empty());
        assert!(stderr.starts_with("error"), "{args:?}: {stderr}");
    }
}

#[test]
fn strict_mode_rejects_non_primitive_rays() {
    let dir = std::env::temp_dir().join(format!("torix-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scaled.json");
    std::fs::write(&path, r#"{"rank":1,"rays":[[2],[-1]],"max_cones":[[0],[1]]}"#).unwrap();
    let p = path.to_str().unwrap();

    let (code, v) = run_json(&["classgroup", p]);
    assert_eq!(code, 0);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 1);
    let (code, _) = run_json(&["classgroup", p, "--strict"]);
    assert_eq!(code, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn intersection_check_flag() {
    let dir = std::env::temp_dir().join(format!("torix-cli-x-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("overlap.json");
    std::fs::write(
        &path,
        r#"{"rank":2,"rays":[[1,0],[0,1],[1,1],[-1,2]],"max_cones":[[0,1],[2,3]]}"#,
    )
    .unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run_json(&["classgroup", p]).0, 0);
    assert_eq!(run_json(&["classgroup", p, "--check-intersections"]).0, 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn help_goes_to_stdout() {
    let (code, stdout, stderr) = run_in_process(&["--help".to_owned()]);
    assert_eq!(code, 0);
    assert!(stdout.contains("frobenius"));
    assert!(stderr.is_empty());
}
