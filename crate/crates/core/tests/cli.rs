//! End-to-end checks of the command-line interface: worked values, exit
//! codes, stdin handling and byte-stable output.

use std::io::Write;
use std::process::{Command, Stdio};

fn volog(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_volog"))
        .args(args)
        .output()
        .expect("the binary runs");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("stdout is text"),
        String::from_utf8(out.stderr).expect("stderr is text"),
    )
}

fn volog_stdin(args: &[&str], input: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_volog"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the binary runs");
    child
        .stdin
        .take()
        .expect("stdin is piped")
        .write_all(input.as_bytes())
        .expect("input is written");
    let out = child.wait_with_output().expect("the binary exits");
    (
        out.status.code().expect("no signal"),
        String::from_utf8(out.stdout).expect("stdout is text"),
        String::from_utf8(out.stderr).expect("stderr is text"),
    )
}

const THETA_COCHAIN: &str = r#"{
  "graph": {
    "vertices": ["A", "B"],
    "edges": [
      {"id": "e1", "tail": "A", "head": "B"},
      {"id": "e2", "tail": "A", "head": "B"},
      {"id": "e3", "tail": "A", "head": "B"}
    ]
  },
  "values": {"e1": "1", "e2": "2", "e3": "3"}
}"#;

const SAMPLE_LAURENT: &str = r#"{"p": 5, "coeffs": {"0": "5", "1": "1", "3": "1"}}"#;

#[test]
fn tate_integrate_prints_the_worked_value() {
    let (code, stdout, _) = volog(&[
        "tate-integrate",
        "--prime",
        "5",
        "--q",
        "125",
        "--z",
        "6",
        "--branch",
        "0",
        "--prec",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "55 + O(5^3)\n");
}

#[test]
fn explain_exposes_the_intermediates() {
    let (code, stdout, _) = volog(&[
        "tate-integrate",
        "--prime",
        "5",
        "--q",
        "125",
        "--z",
        "30",
        "--branch",
        "17",
        "--prec",
        "6",
    ]);
    assert_eq!(code, 0);
    let plain = stdout;

    let (code, stdout, _) = volog(&[
        "tate-integrate",
        "--prime",
        "5",
        "--q",
        "125",
        "--z",
        "30",
        "--branch",
        "17",
        "--prec",
        "6",
        "--explain",
    ]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("explain emits JSON");
    for key in ["cochain", "harmonic", "gamma", "reduced", "vertex", "result"] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
    assert_eq!(doc["vertex"], "v1");
    assert_eq!(doc["result"].as_str().unwrap().to_string() + "\n", plain);
}

#[test]
fn log_and_teichmuller_print_worked_values() {
    let (code, stdout, _) = volog(&["log", "--prime", "5", "--prec", "3", "--branch", "0", "6"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "55 + O(5^3)\n");

    let (code, stdout, _) = volog(&["teichmuller", "--prime", "5", "--prec", "3", "2"]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "57 + O(5^3)\n");
}

#[test]
fn lemma_check_reports_the_sample_instance() {
    let (code, stdout, _) = volog_stdin(&["lemma-check", "-"], SAMPLE_LAURENT);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{\"residue\":1,\"boundary\":1,\"equal\":true}\n");
}

#[test]
fn residue_prints_a_bare_integer() {
    let (code, stdout, _) = volog_stdin(&["residue", "-"], SAMPLE_LAURENT);
    assert_eq!(code, 0);
    assert_eq!(stdout, "1\n");
}

#[test]
fn newton_lists_vertices_and_segments() {
    let (code, stdout, _) = volog_stdin(&["newton", "-"], SAMPLE_LAURENT);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("newton emits JSON");
    assert_eq!(doc["vertices"][0], serde_json::json!([0, 1]));
    assert!(doc["segments"].as_array().unwrap().len() >= 1);
}

#[test]
fn decompose_splits_the_theta_cochain() {
    let (code, stdout, _) = volog_stdin(
        &["decompose", "--prime", "5", "--prec", "10", "-"],
        THETA_COCHAIN,
    );
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("decompose emits JSON");
    assert_eq!(doc["gamma"]["A"], "0");
    assert_eq!(doc["gamma"]["B"], "2 + O(5^10)");
    assert_eq!(doc["harmonic"]["e1"], "9765624 + O(5^10)");
    assert_eq!(doc["harmonic"]["e2"], "O(5^10)");
    assert_eq!(doc["harmonic"]["e3"], "1 + O(5^10)");
}

#[test]
fn normalize_emits_offsets_and_harmonic_defect() {
    let (code, stdout, _) = volog_stdin(
        &["normalize", "--prime", "5", "--prec", "10", "-"],
        THETA_COCHAIN,
    );
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("normalize emits JSON");
    assert_eq!(doc["offsets"]["B"], "2 + O(5^10)");
    assert_eq!(doc["harmonic"]["e2"], "O(5^10)");
}

#[test]
fn subdivide_replaces_edges_by_paths() {
    let graph = r#"{
      "vertices": ["A", "B"],
      "edges": [
        {"id": "e1", "tail": "A", "head": "B"},
        {"id": "e2", "tail": "B", "head": "A"}
      ]
    }"#;
    let (code, stdout, _) = volog_stdin(&["subdivide", "-m", "3", "-"], graph);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout).expect("subdivide emits JSON");
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 6);
    assert_eq!(doc["edge_map"]["e1"].as_array().unwrap().len(), 3);
}

#[test]
fn interpolate_walks_between_the_samples() {
    let (code, stdout, _) = volog(&[
        "interpolate",
        "--prime",
        "5",
        "--prec",
        "3",
        "--base",
        "55 + O(5^3)",
        "--harmonic",
        "10",
        "--t",
        "1/2",
    ]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "60 + O(5^3)\n");
}

#[test]
fn parse_problems_exit_2_and_name_the_field() {
    let (code, _, stderr) = volog(&["log", "--prime", "4", "--branch", "0", "6"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--prime"), "stderr was: {stderr}");

    let (code, _, stderr) = volog(&["log", "--prime", "5", "--branch", "0", "six"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("z:"), "stderr was: {stderr}");

    let (code, _, stderr) = volog(&["log", "--prime", "5", "--branch", "x", "6"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--branch"), "stderr was: {stderr}");

    let (code, _, stderr) = volog_stdin(&["residue", "-"], "{\"p\": 5");
    assert_eq!(code, 2);
    assert!(!stderr.is_empty());

    let approximate = r#"{"p": 5, "coeffs": {"0": "O(5^2)", "1": "1"}}"#;
    let (code, _, stderr) = volog_stdin(&["residue", "-"], approximate);
    assert_eq!(code, 2);
    assert!(stderr.contains("exact"), "stderr was: {stderr}");
}

#[test]
fn domain_problems_exit_1() {
    let (code, _, stderr) = volog(&["log", "--prime", "5", "--branch", "0", "0"]);
    assert_eq!(code, 1);
    assert!(!stderr.is_empty());

    let (code, _, stderr) = volog(&[
        "tate-integrate",
        "--prime",
        "5",
        "--q",
        "5",
        "--z",
        "6",
        "--branch",
        "0",
    ]);
    assert_eq!(code, 1);
    assert!(stderr.contains("error"), "stderr was: {stderr}");

    let (code, _, _) = volog(&[
        "interpolate",
        "--prime",
        "5",
        "--base",
        "1",
        "--harmonic",
        "1",
        "--t",
        "3/2",
    ]);
    assert_eq!(code, 1);

    let annulus_divisor = r#"{"p": 5, "coeffs": {"0": "5", "2": "1"}}"#;
    let (code, _, _) = volog_stdin(&["residue", "-"], annulus_divisor);
    assert_eq!(code, 1);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "tate-integrate",
        "--prime",
        "5",
        "--q",
        "250",
        "--z",
        "30",
        "--branch",
        "17",
        "--prec",
        "10",
        "--explain",
    ];
    let first = volog(&args);
    let second = volog(&args);
    assert_eq!(first, second);
    assert_eq!(first.0, 0);
}

#[test]
fn selftest_reports_every_criterion_and_passes() {
    let (code, stdout, _) = volog(&["selftest"]);
    assert_eq!(code, 0);
    assert_eq!(stdout.matches("criterion").count(), 7);
    assert_eq!(stdout.matches("PASS").count(), 7);
    assert!(stdout.ends_with("selftest: all criteria passed\n"));

    let again = volog(&["selftest"]);
    assert_eq!(again.1, stdout);
}

#[test]
fn corrupted_branch_hook_fails_the_selftest() {
    let (code, stdout, _) = volog(&["selftest", "--corrupt-branch"]);
    assert_eq!(code, 1);
    assert!(stdout.contains("FAIL"));
}
