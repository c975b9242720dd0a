use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("mbc").chain(args.iter().copied());
    let code = mbc_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn validate_disk() {
    let (code, out, _) = run(&["validate", &data("disk.json")]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), r#"{"valid":true}"#);
}

#[test]
fn validate_tangent_fails() {
    let (code, out, _) = run(&["validate", &data("tangent.json")]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["violations"].as_array().unwrap().iter().any(|x| x["clause"] == "transversal"));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"circles\": 3}").unwrap();
    assert_eq!(run(&["validate", bad.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["validate", "/no/such/file.json"]).0, 2);
    assert_eq!(run(&["graph", &data("disk.json"), "--axis", "z"]).0, 2);
    assert_eq!(run(&["validate", &data("disk.json"), "--bogus"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn graph_dot_for_disk() {
    let (code, out, _) = run(&["graph", &data("disk.json"), "--axis", "x", "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    assert_eq!(out.matches("->").count(), 1);
    assert_eq!(out.matches("[label=").count(), 2);
}

#[test]
fn graph_json_round_trips_byte_for_byte() {
    let (code, out, _) = run(&["graph", &data("annulus.json"), "--axis", "y"]);
    assert_eq!(code, 0);
    let g = mbc_core::json::graph_from_json(&out).unwrap();
    assert_eq!(g.vertices.len(), 4);
    assert_eq!(mbc_core::json::graph_to_json(&g), out.trim_end());
}

#[test]
fn regular_poles_flag_adds_vertices() {
    let (_, plain, _) = run(&["graph", &data("disk.json")]);
    let (_, more, _) = run(&["graph", &data("disk.json"), "--declare-regular-poles"]);
    let count = |s: &str| serde_json::from_str::<Value>(s).unwrap()["vertices"].as_array().unwrap().len();
    assert_eq!(count(&plain), 2);
    assert_eq!(count(&more), 3);
}

#[test]
fn graph_svg_is_svg() {
    let (code, out, _) = run(&["graph", &data("lens.json"), "--format", "svg"]);
    assert_eq!(code, 0);
    assert!(out.contains("<svg") && out.contains("</svg>"));
}

#[test]
fn verify_pole_move() {
    let (code, out, _) = run(&["verify", &data("disk.json"), "--moves", &data("pole-move.json")]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdict"], "ok");
    assert_eq!(v["steps"][0]["axes"][0]["case"], "2.2.1");
    assert_eq!(v["steps"][0]["axes"][0]["verdict"], "ok");
}

#[test]
fn add_writes_arrangement() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("next.json");
    let (code, out, _) = run(&[
        "add",
        &data("disk.json"),
        "--circle",
        "c0",
        "--angle",
        "2.214",
        "--out",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let report: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(report["axes"][0]["case"], "2.1.1");
    let next = std::fs::read_to_string(&dest).unwrap();
    let arr = mbc_core::Arrangement::from_json(&next).unwrap();
    assert_eq!(arr.circles.len(), 2);
    // the written file validates through the command line too
    assert_eq!(run(&["validate", dest.to_str().unwrap()]).0, 0);
}

#[test]
fn add_rejects_oversized_radius() {
    let (code, _, err) = run(&["add", &data("disk.json"), "--circle", "c0", "--angle", "0", "--radius", "2"]);
    assert_eq!(code, 1);
    assert!(err.contains("cannot place"));
}

#[test]
fn classify_is_a_dry_run() {
    let before = std::fs::read_to_string(data("annulus.json")).unwrap();
    let (code, out, _) = run(&["classify", &data("annulus.json"), "--circle", "c1", "--angle", "0"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["axes"][0]["case"], "2.2.2");
    assert_eq!(v["axes"][0]["profile"]["a"], 2);
    assert_eq!(std::fs::read_to_string(data("annulus.json")).unwrap(), before);
    let (_, one, _) = run(&["classify", &data("annulus.json"), "--circle", "c1", "--angle", "0", "--axis", "y"]);
    let v: Value = serde_json::from_str(&one).unwrap();
    assert_eq!(v["axes"].as_array().unwrap().len(), 1);
    assert_eq!(v["axes"][0]["case"], "2.3.2");
}

#[test]
fn negative_angles_parse() {
    let (code, out, _) = run(&["classify", &data("disk.json"), "--circle", "c0", "--angle", "-1.5707963267948966"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["axes"][1]["case"], "2.2.1");
}

#[test]
fn fuzz_is_deterministic() {
    let args = ["fuzz", "--seeds", "3", "--moves", "3", "--rng", "5"];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["runs"], 3);
}

#[test]
fn render_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let dest = dir.path().join("annulus.svg");
    let (code, _, _) = run(&["render", &data("annulus.json"), "--out", dest.to_str().unwrap()]);
    assert_eq!(code, 0);
    let svg = std::fs::read_to_string(dest).unwrap();
    assert!(svg.contains("mask=\"url(#holes)\""));
}

#[test]
fn binary_exit_codes() {
    let exe = env!("CARGO_BIN_EXE_mbc");
    let ok = Command::new(exe).args(["validate", &data("disk.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout).trim(), r#"{"valid":true}"#);
    let bad = Command::new(exe).args(["validate", &data("tangent.json")]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let usage = Command::new(exe).arg("validate").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
