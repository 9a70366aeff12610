use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn hdx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hdx")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn oct() -> String {
    fixture("octahedron.json").to_str().unwrap().to_string()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(hdx(&["--help"]).status.code(), Some(0));
    assert_eq!(hdx(&["--version"]).status.code(), Some(0));
    assert!(stdout(&hdx(&["verify", "--help"])).contains("--theorem"));
}

#[test]
fn usage_errors() {
    assert_eq!(hdx(&[]).status.code(), Some(1));
    assert_eq!(hdx(&["verify", "--theorem", "no-such-theorem", &oct()]).status.code(), Some(1));
    assert_eq!(hdx(&["spectrum", &oct(), "--degree", "7"]).status.code(), Some(1));
    assert_eq!(hdx(&["spectrum", &oct(), "--degree", "0", "--link", "0,1,2,3"]).status.code(), Some(1));
    assert_eq!(hdx(&["generate", "--family", "complete", "--n", "2"]).status.code(), Some(1));
    assert_eq!(hdx(&["--format", "yaml", "analyze", &oct()]).status.code(), Some(1));
}

#[test]
fn unreadable_input_is_an_input_error() {
    let o = hdx(&["analyze", "/definitely/not/here.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: "));
}

#[test]
fn parse_errors_report_position() {
    let o = hdx(&["analyze", fixture("malformed.json").to_str().unwrap()]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn text_and_json_agree() {
    let text = stdout(&hdx(&["spectrum", &oct(), "--degree", "1"]));
    let j = json(&hdx(&["--format", "json", "spectrum", &oct(), "--degree", "1"]));
    let from_text: Vec<f64> = text
        .lines()
        .find_map(|l| l.strip_prefix("eigenvalues: "))
        .unwrap()
        .split(' ')
        .map(|s| s.parse().unwrap())
        .collect();
    let from_json: Vec<f64> = j["eigenvalues"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(from_text, from_json);
    assert_eq!(from_json.len(), 12);
}

#[test]
fn link_spectrum() {
    let o = hdx(&["--format", "json", "spectrum", &oct(), "--degree", "0", "--link", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["eigenvalues"], serde_json::json!([0.0, 1.0, 1.0, 2.0]));
    assert_eq!(j["operator"], "up_laplacian on link {4}");
}

#[test]
fn top_degree_defaults_to_down_laplacian() {
    let j = json(&hdx(&["--format", "json", "spectrum", &oct(), "--degree", "2"]));
    assert_eq!(j["operator"], "down_laplacian");
    assert_eq!(j["eigenvalues"].as_array().unwrap().len(), 8);
}

#[test]
fn partite_spectrum_separates_the_top() {
    let k333 = fixture("k333.json");
    let j = json(&hdx(&["--format", "json", "spectrum", k333.to_str().unwrap(), "--degree", "0"]));
    assert_eq!(j["kappa_max"], 1.5);
    assert_eq!(j["kappa_nontrivial"], 1.0);
}

#[test]
fn verify_json_shape() {
    let o = hdx(&["--format", "json", "verify", &oct(), "--theorem", "garland-norm"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["outcome"], "pass");
    assert_eq!(j["partition"], "document");
    let reports = j["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 2);
    for r in reports {
        assert_eq!(r["theorem"], "garland-norm");
        assert!(r["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    }
}

#[test]
fn partition_is_detected_when_absent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bare.json");
    let doc = json(&hdx(&["generate", "--family", "cross_polytope", "--n", "2"]));
    let bare = serde_json::json!({ "facets": doc["facets"] });
    std::fs::write(&path, bare.to_string()).unwrap();
    let p = path.to_str().unwrap();
    let a = json(&hdx(&["--format", "json", "analyze", p]));
    assert_eq!(a["partition"]["source"], "detected");
    assert_eq!(a["partition"]["sides"], serde_json::json!([[0, 1], [2, 3], [4, 5]]));
    let v = hdx(&["--format", "json", "verify", p, "--theorem", "partite-top-eigenspace"]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["partition"], "detected");
}

#[test]
fn seed_changes_only_the_seeded_parts() {
    let a = json(&hdx(&["--format", "json", "--seed", "1", "verify", &oct(), "--theorem", "structural-identities"]));
    let b = json(&hdx(&["--format", "json", "--seed", "2", "verify", &oct(), "--theorem", "structural-identities"]));
    assert_eq!(a["reports"][0]["seed"], 1);
    assert_eq!(b["reports"][0]["seed"], 2);
    assert_eq!(a["outcome"], "pass");
    assert_eq!(b["outcome"], "pass");
}

#[test]
fn generate_to_stdout_matches_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.json");
    let args = ["generate", "--family", "random_partite", "--sizes", "2,2,2", "--p", "0.9", "--seed", "3"];
    let printed = stdout(&hdx(&args));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(hdx(&with_out).status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), printed);
}

#[test]
fn analyze_text_report() {
    let text = stdout(&hdx(&["analyze", fixture("suspension_c7.json").to_str().unwrap()]));
    assert!(text.contains("dimension: 2\n"));
    assert!(text.contains("simplices[0]: 9\n"));
    assert!(text.contains("simplices[1]: 21\n"));
    assert!(text.contains("simplices[2]: 14\n"));
    assert!(text.contains("betti_numbers: 1 0 1\n"));
    assert!(text.contains("gallery_connected: true\n"));
}
