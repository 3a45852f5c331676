use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;
use tempfile::TempDir;

fn gbs(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_gbs")).args(args).output().expect("gbs runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).unwrap())
}

fn gbs_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let (code, out) = gbs(&all);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: not JSON ({e}): {out}"));
    (code, v)
}

fn example(dir: &TempDir, family: &str, params: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{family}{}.json", params.join("_")));
    let mut args = vec!["example", family];
    args.extend_from_slice(params);
    args.extend_from_slice(&["--out", path.to_str().unwrap()]);
    assert_eq!(gbs(&args).0, 0);
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_structure() {
    let dir = TempDir::new().unwrap();
    let g1 = example(&dir, "g1", &["2", "2"]);
    let (code, v) = gbs_json(&["validate", "--graph", s(&g1)]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "valid");
    assert_eq!(v["rank"], 1);
    assert_eq!(v["nonElementaryCertified"], true);
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let (code, v) = gbs_json(&["validate", "--graph", s(&bad)]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "error");
    assert_eq!(gbs(&["validate", "--graph", "/nonexistent.json"]).0, 3);
    assert_eq!(gbs(&["no-such-command"]).0, 3);
}

#[test]
fn repro_pipelines_exit_zero() {
    let (code, v) = gbs_json(&["repro", "mainthm", "--k", "4", "--n", "6"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    assert_eq!(v["comparison"]["status"], "Inequivalent");
    assert_eq!(v["comparison"]["cycles"], serde_json::json!([[6], [3, 12]]));
    let (code, v) = gbs_json(&["repro", "mainthm", "--k", "3", "--n", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["comparison"]["status"], "Equivalent");
    for args in [&["repro", "easycase"][..], &["repro", "g3"], &["repro", "g4", "--k", "5", "--n", "2"]] {
        let (code, v) = gbs_json(args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["comparison"]["status"], "Inequivalent");
    }
}

#[test]
fn lattice_check_passes_and_fails() {
    let dir = TempDir::new().unwrap();
    let g2 = example(&dir, "g2", &["2", "2"]);
    let (code, v) = gbs_json(&["lattice", "check", "--graph", s(&g2), "--m", "2", "--n", "4", "--ell", "auto"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["holds"], true);
    assert_eq!(v["characterization"]["holds"], true);
    let (code, v) = gbs_json(&["lattice", "check", "--graph", s(&g2), "--m", "3", "--n", "5", "--dir", "auto"]);
    assert_eq!(code, 1, "{v}");
    assert_eq!(v["holds"], false);
    let (code, v) = gbs_json(&["lattice", "discrete", "--m", "4", "--n", "6"]);
    assert_eq!((code, v["discrete"].as_bool()), (0, Some(false)));
}

#[test]
fn depth_and_compare() {
    let dir = TempDir::new().unwrap();
    let bs = example(&dir, "bs", &["2", "4"]);
    let (code, out) = gbs(&["depth", "--graph", s(&bs), "--base", "v", "--maxlen", "8"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v, serde_json::json!([1, 2, 4, 8, 16, 32]));

    let (code, closed) = gbs_json(&["depth", "--mode", "closed", "--N", "36", "--divisors", "1,3"]);
    assert_eq!(code, 0);
    let p1 = dir.path().join("p1.json");
    let p2 = dir.path().join("p2.json");
    std::fs::write(&p1, closed.to_string()).unwrap();
    std::fs::write(&p2, r#"{"head":[],"tailScales":[1],"ratio":6}"#).unwrap();
    let (code, v) = gbs_json(&["compare", "--p1", s(&p1), "--p2", s(&p2)]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "Inequivalent");

    let t1 = dir.path().join("t1.json");
    let t2 = dir.path().join("t2.json");
    std::fs::write(&t1, "[1, 6, 36]").unwrap();
    std::fs::write(&t2, "[1, 36]").unwrap();
    let (code, v) = gbs_json(&["compare", "--p1", s(&t1), "--p2", s(&t2), "--bound", "10"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"], serde_json::json!({ "r": 1, "rPrime": 6 }));
    let (code, v) = gbs_json(&["compare", "--p1", s(&t1), "--p2", s(&t2), "--bound", "5"]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "NoneFound");
}

#[test]
fn refusals_exit_two() {
    let dir = TempDir::new().unwrap();
    let w = dir.path().join("w.json");
    std::fs::write(
        &w,
        r#"{"vertices":["v"],"edges":[{"id":"a","from":"v","to":"v","labelAtFrom":1,"labelAtTo":-1}]}"#,
    )
    .unwrap();
    let (code, v) = gbs_json(&["depth", "--graph", s(&w), "--base", "v", "--maxlen", "4"]);
    assert_eq!(code, 2, "{v}");
    let g1 = example(&dir, "g1", &["2", "2"]);
    let (code, _) = gbs_json(&["depth", "--graph", s(&g1), "--base", "v", "--maxlen", "40"]);
    assert_eq!(code, 2);
}

#[test]
fn cover_deform_and_dot_exports() {
    let dir = TempDir::new().unwrap();
    let h2 = example(&dir, "h2cover", &["2", "2"]);
    let (code, v) = gbs_json(&["cover", "verify", s(&h2)]);
    assert_eq!((code, v["valid"].as_bool()), (0, Some(true)));
    let (code, v) = gbs_json(&["cover", "index", s(&h2)]);
    assert_eq!((code, v["index"].as_u64()), (0, Some(2)));

    let g1 = example(&dir, "g1", &["2", "2"]);
    let bs = example(&dir, "bs", &["2", "4"]);
    let (code, v) = gbs_json(&["deform", "--graph", s(&g1), "--reduce", "--target", s(&bs)]);
    assert_eq!(code, 1, "G1(2,2) has no collapsible edge: {v}");
    assert_eq!(v["isomorphicToTarget"], false);

    let ball_dot = dir.path().join("ball.dot");
    let (code, v) = gbs_json(&["ball", "--graph", s(&g1), "--base", "v", "--radius", "3", "--width", "3", "--dot", s(&ball_dot)]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["violations"], serde_json::json!([]));
    assert!(std::fs::read_to_string(&ball_dot).unwrap().starts_with("digraph"));

    let delta_dot = dir.path().join("delta.dot");
    let (code, v) = gbs_json(&[
        "cayley", "--graph", s(&g1), "--m", "2", "--n", "4", "--radius", "8", "--class", "white", "--dot", s(&delta_dot),
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["interiorDegrees"], serde_json::json!([44]));
    assert!(delta_dot.exists());
    let (code, _) = gbs_json(&["cayley", "--graph", s(&g1), "--radius", "1"]);
    assert_eq!(code, 2);
}
