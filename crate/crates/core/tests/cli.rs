use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn phda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_phda")).args(args).output().unwrap()
}

fn with_fixture(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let path = fixture(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    phda(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = with_fixture("validate", "square.json", &[]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["is_hda"], true);
    let cube = with_fixture("validate", "missing_cube.json", &[]);
    assert_eq!(cube.status.code(), Some(0));
    let bad = with_fixture("validate", "badlax.json", &[]);
    assert_eq!(bad.status.code(), Some(2));
    let report = json(&bad);
    assert!(report["violations"][0].as_str().unwrap().starts_with("LaxLawViolation"));
    assert_eq!(phda(&["validate", "no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn is_tree_exit_codes() {
    let yes = with_fixture("is-tree", "pushoutD.json", &[]);
    assert_eq!(yes.status.code(), Some(0));
    assert_eq!(json(&yes)["certificate"]["verdict"], "Tree");
    let no = with_fixture("is-tree", "square.json", &[]);
    assert_eq!(no.status.code(), Some(1));
    assert_eq!(json(&no)["certificate"]["verdict"], "MultipleClasses");
}

#[test]
fn complete_matches_golden() {
    let out = with_fixture("complete", "split_segment.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(fixture("golden_complete_split_segment.json")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn paths_and_homotopy() {
    let out = with_fixture("paths", "square.json", &["--to", "v11", "--max-len", "4"]);
    assert_eq!(json(&out).as_array().unwrap().len(), 6);
    let out = with_fixture("homotopy", "square.json", &["--to", "v11", "--max-len", "4"]);
    assert_eq!(json(&out).as_array().unwrap().len(), 4);
    let out = with_fixture("homotopy", "pushoutD.json", &["--to", "B:4"]);
    let classes = json(&out);
    assert_eq!(classes.as_array().unwrap().len(), 1);
    assert_eq!(classes[0]["members"].as_array().unwrap().len(), 2);
}

#[test]
fn unfold_and_colimit_sidecars() {
    let tmp = tempfile::tempdir().unwrap();
    let side = tmp.path().join("unf.json");
    let out = with_fixture("unfold", "loop.json", &["--depth", "3", "--sidecar", side.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["cells"].as_array().unwrap().len(), 4);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(side["truncated"], true);
    assert_eq!(side["unf"]["v@0"], "v");

    let side = tmp.path().join("inj.json");
    let out = with_fixture("colimit", "pushout_diagram.json", &["--sidecar", side.to_str().unwrap()]);
    assert_eq!(json(&out)["cells"].as_array().unwrap().len(), 6);
    let side: Value = serde_json::from_str(&std::fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(side["injections"]["B"]["4"], side["injections"]["C"]["4"]);
}

#[test]
fn open_and_covering() {
    let fold = fixture("fold.json");
    let fold = fold.to_str().unwrap();
    assert_eq!(phda(&["check-open", fold, "--max-len", "3"]).status.code(), Some(0));
    assert_eq!(phda(&["check-open", fold, "--exhaustive", "--max-len", "3"]).status.code(), Some(0));
    let cov = phda(&["check-covering", fold, "--max-len", "3"]);
    assert_eq!(cov.status.code(), Some(1));
    assert_eq!(json(&cov)["counterexample"]["lifts"], 2);
    let cover = with_fixture("check-covering", "loop_cover_map.json", &["--max-len", "5"]);
    assert_eq!(cover.status.code(), Some(0));
}

#[test]
fn lift_through_cover() {
    let g = fixture("loop_unfolding.json");
    let f = fixture("loop_cover_map.json");
    let out = phda(&["lift", g.to_str().unwrap(), f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let h = json(&out);
    assert_eq!(h["map"]["v@0"], "v0");
    assert_eq!(h["map"].as_object().unwrap().len(), 5);
    assert_eq!(h["map"]["v@2"], "v0");
}

#[test]
fn dot_is_deterministic() {
    let a = with_fixture("dot", "square.json", &[]);
    let b = with_fixture("dot", "square.json", &[]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("digraph phda {"));
    assert_eq!(text.matches(" -> ").count(), 4);
}
