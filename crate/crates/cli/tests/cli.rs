use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn colorfold(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_colorfold")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), v, stdout)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn analyze_prism_identity() {
    let (code, v, _) = colorfold(&["analyze", "@prism:5", "@identity"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["global_geometry"], "H2xR");
    assert_eq!(v["closed"], true);
    assert_eq!(v["orientable"], true);
}

#[test]
fn analyze_non_orientable_suggests_cover() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.json", r#"{"r":3,"cols":[1,1,2,4,2,4,6]}"#);
    let (code, v, _) = colorfold(&["analyze", "@prism:5", &c]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "NotOrientable");
    let cover = &v["error"]["hint"]["double_cover"];
    assert_eq!(cover["r"], 4);
    let (code, v, _) = colorfold(&["validate", "@prism:5", "--coloring", &write(dir.path(), "d.json", &cover.to_string())]);
    assert_eq!(code, 0);
    assert_eq!(v["coloring"]["orientable"], true);
}

#[test]
fn validate_reports_the_broken_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"m":4,"vertices":[[1,2,3]]}"#);
    let (code, v, _) = colorfold(&["validate", &bad]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "UnmatchedEdge");
    let (code, v, _) = colorfold(&["validate", "missing.json"]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["kind"], "File");
    let (code, _, _) = colorfold(&["validate", "@cube"]);
    assert_eq!(code, 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(colorfold(&["belts", "@cube"]).0, 2);
    assert_eq!(colorfold(&["frobnicate"]).0, 2);
    assert_eq!(colorfold(&["belts", "@cube", "--k", "x"]).0, 2);
}

#[test]
fn enumerate_simplex_rank_three() {
    let (code, v, _) = colorfold(&["enumerate-colorings", "@simplex", "--rank", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["count"], 1);
    let (_, v, _) = colorfold(&["enumerate-colorings", "@cube", "--rank", "3", "--orientable", "--maximal"]);
    assert_eq!(v["count"], 4);
    assert!(v["classes"].as_array().unwrap().iter().all(|c| c["maximal"] == true));
    assert_eq!(colorfold(&["enumerate-colorings", "@cube", "--rank", "2"]).0, 1);
}

#[test]
fn belts_of_the_cube() {
    let (_, v, _) = colorfold(&["belts", "@cube", "--k", "4"]);
    assert_eq!(v["count"], 3);
    assert!(v["belts"].as_array().unwrap().iter().all(|b| b["trivial"] == true));
    let (_, v, _) = colorfold(&["belts", "@prism:5", "--k", "5"]);
    assert_eq!(v["count"], 1);
    assert_eq!(v["belts"][0]["surrounds"], serde_json::json!([1, 2]));
}

#[test]
fn emitted_polytopes_reparse() {
    let dir = tempfile::tempdir().unwrap();
    let (_, v, _) = colorfold(&["info", "@associahedron3"]);
    let f = write(dir.path(), "a.json", &v["polytope"].to_string());
    let (code, w, _) = colorfold(&["info", &f]);
    assert_eq!(code, 0);
    assert_eq!(w["polytope"], v["polytope"]);
    assert_eq!(w["classification"]["kind"], "almost_pogorelov");
}

#[test]
fn prime_decomposition_with_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("t.dot");
    let (code, v, _) = colorfold(&["decompose-prime", "@prism:3", "--coloring", "@identity", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["tree"]["leaves"].as_array().unwrap().len(), 2);
    assert_eq!(v["prime_expression"]["text"], "S2xS1");
    assert!(std::fs::read_to_string(dot).unwrap().contains("l0 -- l1"));
}

#[test]
fn jsj_is_seed_independent_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (_, a, text_a) = colorfold(&["decompose-jsj", "@associahedron3", "--coloring", "@identity"]);
    let (_, _, text_b) = colorfold(&["decompose-jsj", "@associahedron3", "--coloring", "@identity"]);
    assert_eq!(text_a, text_b);
    let (_, b, _) = colorfold(&["decompose-jsj", "@associahedron3", "--seed", "7", "--coloring", "@identity"]);
    assert_eq!(a["decomposition"]["belts"], b["decomposition"]["belts"]);
    assert_eq!(a["jsj"]["totals"]["boundary"], "96");
    let dot = dir.path().join("j.dot");
    let (code, _, _) = colorfold(&["decompose-jsj", "@prism:6", "--dot", dot.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("graph jsj"));
    assert_eq!(colorfold(&["decompose-jsj", "@cube"]).1["error"]["kind"], "IsCube");
}

#[test]
fn oracle_self_checks_pass() {
    let (code, v, _) = colorfold(&["oracle", "--check", "all"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let (code, v, _) = colorfold(&["oracle", "@cube", "@search-small-cover"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["euler_characteristic"], 0);
    assert_eq!(v["summary"]["closed_manifold"], true);
}

#[test]
fn catalog_lists_names() {
    let (code, v, _) = colorfold(&["catalog"]);
    assert_eq!(code, 0);
    assert_eq!(v["polytopes"].as_array().unwrap().len(), 5);
}
