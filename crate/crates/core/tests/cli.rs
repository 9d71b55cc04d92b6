use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn heegaard(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heegaard"))
        .args(args)
        .env_remove("HEEGAARD_MAX_EDGES")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn emit(dir: &TempDir, name: &str, slopes: &[&str]) -> String {
    let path = dir.path().join(name);
    let p = path.to_str().unwrap().to_string();
    let mut args = vec!["template"];
    args.extend_from_slice(slopes);
    args.extend_from_slice(&["--emit", &p]);
    assert!(heegaard(&args).status.success());
    p
}

#[test]
fn analyze_figure_eight() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "h.json", &["1", "1", "1", "1"]);
    let r = json(&heegaard(&["analyze", &path, "--json"]));
    assert_eq!(r["strong"], true);
    assert_eq!(r["det"], -5);
    assert_eq!(r["generator_count"], 5);
    assert_eq!(r["homology_invariants"], serde_json::json!([5]));
    assert_eq!(r["genus"], 2);
    assert_eq!(r["waves"], serde_json::json!([]));
    let table = String::from_utf8(heegaard(&["analyze", &path]).stdout).unwrap();
    assert!(table.contains("Z/5"));
    assert!(!table.contains('\u{1b}'));
}

#[test]
fn emit_then_analyze_agrees_with_the_template_report() {
    let dir = TempDir::new().unwrap();
    for slopes in [["1", "1", "1", "1"], ["1", "1", "1", "-1"], ["1/0", "2", "0/1", "3"], ["2/3", "1/2", "3", "5/2"]] {
        let path = emit(&dir, "t.json", &slopes);
        let mut args = vec!["template", "--json"];
        args.extend_from_slice(&slopes);
        let t = json(&heegaard(&args));
        let a = json(&heegaard(&["analyze", &path, "--json"]));
        for key in ["matrix", "det", "generator_count", "strong", "homology_invariants", "reducible_witness"] {
            let mut want = t[key].clone();
            if key == "homology_invariants" {
                want = Value::Array(want.as_array().unwrap().iter().filter(|x| **x != 1).cloned().collect());
            }
            assert_eq!(a[key], want, "{slopes:?} {key}");
        }
        // emitting the analyzed file again changes nothing
        let again = fs::read_to_string(&path).unwrap();
        let path2 = emit(&dir, "t2.json", &slopes);
        assert_eq!(fs::read_to_string(path2).unwrap(), again);
    }
}

#[test]
fn template_examples() {
    let r = json(&heegaard(&["template", "1", "1", "1", "-1", "--json"]));
    assert_eq!(r["strong"], false);
    assert_eq!(r["alternating"], false);
    let r = json(&heegaard(&["template", "1/0", "2", "0/1", "3", "--json"]));
    assert!(r["reducible_witness"].is_array());
    assert_eq!(r["strong"], true);
    let bad = heegaard(&["template", "1/x", "1", "1", "1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn rotated_files_give_byte_identical_reports() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "h.json", &["2", "1/2", "1", "3"]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    for key in ["alpha_words", "beta_words"] {
        for (k, w) in v[key].as_array_mut().unwrap().iter_mut().enumerate() {
            let w = w.as_array_mut().unwrap();
            let n = w.len();
            w.rotate_left((k + 1) % n);
        }
    }
    let rotated = dir.path().join("rotated.json");
    fs::write(&rotated, serde_json::to_string(&v).unwrap()).unwrap();
    let a = heegaard(&["analyze", &path, "--json"]);
    let b = heegaard(&["analyze", rotated.to_str().unwrap(), "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_2_and_validation_errors_exit_3() {
    let dir = TempDir::new().unwrap();
    let malformed = dir.path().join("bad.json");
    fs::write(&malformed, "{\"genus\": 1, \"points\": [").unwrap();
    let out = heegaard(&["analyze", malformed.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));

    let mismatched = dir.path().join("genus.json");
    fs::write(
        &mismatched,
        r#"{"genus":2,"points":[{"id":1,"alpha":1,"beta":1,"sign":1}],"alpha_words":[[1]],"beta_words":[[1]]}"#,
    )
    .unwrap();
    let out = heegaard(&["analyze", mismatched.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("genus mismatch"));

    assert_eq!(heegaard(&["analyze", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(heegaard(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(heegaard(&["classify", "borromean", "--bound", "8"]).status.code(), Some(2));
    assert_eq!(heegaard(&["classify", "bounds", "--d", "2"]).status.code(), Some(2));
}

#[test]
fn resource_limits_exit_4() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "h.json", &["1", "1", "1", "1"]);
    assert_eq!(heegaard(&["--limit", "1", "analyze", &path]).status.code(), Some(4));
    assert_eq!(heegaard(&["classify", "polya-zero", "--g", "6"]).status.code(), Some(4));
    assert_eq!(heegaard(&["classify", "cubic-min", "--g", "9"]).status.code(), Some(4));
}

#[test]
fn edge_limit_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "h.json", &["1", "1", "1", "1"]);
    let out = Command::new(env!("CARGO_BIN_EXE_heegaard"))
        .args(["analyze", &path, "--json"])
        .env("HEEGAARD_MAX_EDGES", "2")
        .output()
        .unwrap();
    let r = json(&out);
    assert!(r["generator_signs"].is_null());
    let r = json(&heegaard(&["analyze", &path, "--json"]));
    assert_eq!(r["generator_signs"]["negative"], 5);
}

#[test]
fn dot_export() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "h.json", &["1", "1", "1", "1"]);
    let dot = dir.path().join("g.dot");
    assert!(heegaard(&["analyze", &path, "--dot", dot.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(Path::new(&dot)).unwrap();
    assert!(text.starts_with("graph"));
    assert_eq!(text.matches("--").count(), 6);
}

#[test]
fn classify_subcommands() {
    let r = json(&heegaard(&["classify", "genus3", "--json", "--threads", "2"]));
    assert_eq!(r["findings"]["permanents"], serde_json::json!([16, 20, 16]));
    assert_eq!(r["verdict"], true);
    let r = json(&heegaard(&["classify", "borromean", "--bound", "16", "--json"]));
    assert_eq!(r["witnesses"], serde_json::json!([]));
    let r = json(&heegaard(&["classify", "cubic-min", "--g", "2", "--json"]));
    assert_eq!(r["findings"]["minimum"], 5);
    let r = json(&heegaard(&["classify", "bounds", "--d", "8", "--json"]));
    assert_eq!((r["n_max"].as_u64(), r["m_max"].as_u64()), (Some(12), Some(18)));
    let r = json(&heegaard(&["classify", "polya-zero", "--g", "2", "--bound", "3", "--json"]));
    assert_eq!(r["verdict"], false);
    let text = String::from_utf8(heegaard(&["classify", "cubic-min", "--g", "2"]).stdout).unwrap();
    assert!(text.contains("minimum    5"));
}

#[test]
fn upper_triangular_split() {
    let dir = TempDir::new().unwrap();
    let path = emit(&dir, "sum.json", &["1/0", "1/2", "0/1", "3"]);
    let r = json(&heegaard(&["classify", "upper-triangular", &path, "--json"]));
    assert_eq!(r["verdict"], true);
    assert_eq!(r["findings"]["lens_factors"], serde_json::json!([2, 3]));
    let fig8 = emit(&dir, "fig8.json", &["1", "1", "1", "1"]);
    assert_eq!(heegaard(&["classify", "upper-triangular", &fig8]).status.code(), Some(2));
}
