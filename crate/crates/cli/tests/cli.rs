use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let path = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reslie")).args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stderr));
    });
    (code, json)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn check_names(json: &Value) -> Vec<String> {
    json["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect()
}

fn all_pass(json: &Value) -> bool {
    json["checks"].as_array().unwrap().iter().all(|c| c["pass"] == Value::Bool(true))
}

#[test]
fn identities_report_four_passing_checks() {
    let (code, json) = run_json(&["identities", "--p", "7"]);
    assert_eq!(code, 0);
    assert_eq!(json["command"], "identities");
    assert_eq!(json["checks"].as_array().unwrap().len(), 4);
    assert!(all_pass(&json));
}

#[test]
fn report_has_the_documented_keys_in_order() {
    let out = run(&["identities", "--p", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let keys = ["\"tool_version\"", "\"input_digest\"", "\"command\"", "\"results\"", "\"checks\""];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
    let json: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(json["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn witt5_adjoint_h1_reports_both_dimensions_and_injection() {
    let (code, json) = run_json(&["cohomology", path(&data("witt5.alg")), "--module", "adjoint", "--degree", "1"]);
    assert_eq!(code, 0);
    assert!(json["results"]["restricted_dim"].is_u64());
    assert!(json["results"]["classical_dim"].is_u64());
    assert_eq!(json["results"]["kernel_dim"], 0);
    assert!(check_names(&json).contains(&"H1 injects into classical H1".to_string()));
}

#[test]
fn abelian_resolution_is_exact() {
    let (code, json) = run_json(&["resolve", path(&data("ab2.alg")), "--kmax", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["homology"], serde_json::json!([0, 0, 0]));
    assert_eq!(json["results"]["chain_dims"], serde_json::json!([9, 18, 27]));
}

#[test]
fn abelian_cohomology_cross_checks_resolution() {
    let (code, json) = run_json(&["cohomology", path(&data("ab2.alg")), "--module", "trivial", "--degree", "1"]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["restricted_dim"], 2);
    assert_eq!(json["results"]["abelian_resolution_dim"], 2);
}

#[test]
fn classical_flag_skips_the_restricted_complex() {
    let (code, json) =
        run_json(&["cohomology", path(&data("heis3.alg")), "--module", "trivial", "--degree", "3", "--classical"]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["classical_dim"], 1);
    assert!(json["results"].get("restricted_dim").is_none());
}

#[test]
fn h0_matches_invariants() {
    let (code, json) = run_json(&["cohomology", path(&data("heis3.alg")), "--module", "std", "--degree", "0"]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["restricted_dim"], 1);
    assert_eq!(json["results"]["invariants_dim"], 1);
}

#[test]
fn output_is_byte_stable() {
    for args in [
        vec!["dims", path(&data("heis3.alg"))],
        vec!["derivations", path(&data("heis3.alg"))],
        vec!["witt", "--p", "3"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn digest_tracks_input_bytes() {
    let text = std::fs::read_to_string(data("ab2.alg")).unwrap();
    let a = scratch("digest_a.alg", &text);
    let b = scratch("digest_b.alg", &format!("{text}# trailing comment\n"));
    let (_, ja) = run_json(&["dims", path(&a)]);
    let (_, jb) = run_json(&["dims", path(&b)]);
    assert_ne!(ja["input_digest"], jb["input_digest"]);
    assert_eq!(ja["results"], jb["results"]);
}

#[test]
fn dims_and_derivations_pass() {
    for cmd in ["dims", "derivations", "validate"] {
        for file in ["ab2.alg", "heis3.alg", "witt5.alg"] {
            let (code, json) = run_json(&[cmd, path(&data(file))]);
            assert_eq!(code, 0, "{cmd} {file}");
            assert!(all_pass(&json));
        }
    }
}

#[test]
fn witt_emit_round_trips() {
    let out = run(&["witt", "--p", "5", "--emit"]);
    assert_eq!(out.status.code(), Some(0));
    let emitted = String::from_utf8(out.stdout).unwrap();
    assert_eq!(emitted, std::fs::read_to_string(data("witt5.alg")).unwrap());
    let file = Path::new(env!("CARGO_TARGET_TMPDIR")).join("witt3.alg");
    let out = run(&["witt", "--p", "3", "--emit", "--out", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    let (code, json) = run_json(&["validate", path(&file)]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["dim"], 3);
}

#[test]
fn witt_oracle_report_passes() {
    let (code, json) = run_json(&["witt", "--p", "5"]);
    assert_eq!(code, 0);
    for name in ["bracket", "p-th power", "U_res products"] {
        assert!(check_names(&json).contains(&name.to_string()));
    }
}

#[test]
fn deformation_agrees_with_cocycle_predicate() {
    let zero = scratch("zero.json", "{}");
    let (code, json) = run_json(&["deform-check", path(&data("heis3.alg")), "--cocycle", path(&zero)]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["is_cocycle"], true);
    assert_eq!(json["results"]["deformation_restricted"], true);

    let bent = scratch("bent.json", r#"{"phi": {"y,x": [0, 0, 1]}, "omega": {"z": [1, 0, 0]}}"#);
    let (code, json) = run_json(&["deform-check", path(&data("heis3.alg")), "--cocycle", path(&bent)]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["is_cocycle"], json["results"]["deformation_restricted"]);
}

#[test]
fn infer_recovers_a_restricted_structure() {
    let (code, json) = run_json(&["infer", path(&data("heis3.alg"))]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["center_dim"], 1);
    let inferred = scratch("inferred.alg", json["results"]["file"].as_str().unwrap());
    let (code, _) = run_json(&["validate", path(&inferred)]);
    assert_eq!(code, 0);
}

#[test]
fn infer_accepts_files_without_pmap() {
    let file = scratch("nopmap.alg", "algebra b over GF(5)\nbasis x y\nbracket [x,y] = 1*y\n");
    let (code, json) = run_json(&["infer", path(&file)]);
    assert_eq!(code, 0);
    assert_eq!(json["results"]["pmap"]["x"], serde_json::json!([1, 0]));
    assert_eq!(json["results"]["pmap"]["y"], serde_json::json!([0, 0]));
}

#[test]
fn failed_axiom_exits_one() {
    let file = scratch(
        "bad_pmap.alg",
        "algebra h over GF(3)\nbasis x y z\nbracket [x,y] = 1*z\npmap x^[p] = 0\npmap y^[p] = 0\npmap z^[p] = 1*x\n",
    );
    let (code, json) = run_json(&["validate", path(&file)]);
    assert_eq!(code, 1);
    assert!(!all_pass(&json));
}

#[test]
fn usage_and_input_errors_exit_two() {
    let missing_pmap = scratch("missing.alg", "algebra a over GF(3)\nbasis x y\npmap x^[p] = 0\n");
    let bad_modulus = scratch("gf4.alg", "algebra A over GF(4)\nbasis x\npmap x^[p] = 0\n");
    let (heis, ab2) = (data("heis3.alg"), data("ab2.alg"));
    let cases: Vec<Vec<&str>> = vec![
        vec!["identities", "--p", "4"],
        vec!["identities"],
        vec!["frobnicate"],
        vec!["dims", "/nonexistent/file.alg"],
        vec!["dims", path(&missing_pmap)],
        vec!["dims", path(&bad_modulus)],
        vec!["cohomology", path(&heis), "--module", "nope", "--degree", "1"],
        vec!["cohomology", path(&heis), "--module", "trivial", "--degree", "3"],
        vec!["resolve", path(&heis), "--kmax", "1"],
        vec!["resolve", path(&ab2), "--kmax", "3"],
        vec!["witt", "--p", "17"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let err = String::from_utf8(run(&["dims", path(&missing_pmap)]).stderr).unwrap();
    assert!(err.contains("y"), "{err}");
}

#[test]
fn malformed_cocycle_file_exits_two() {
    for (name, text) in [
        ("garbage.json", "not json"),
        ("unknown_label.json", r#"{"omega": {"w": [0, 0, 0]}}"#),
        ("short.json", r#"{"omega": {"x": [0]}}"#),
        ("bad_key.json", r#"{"phi": {"xy": [0, 0, 0]}}"#),
    ] {
        let file = scratch(name, text);
        let out = run(&["deform-check", path(&data("heis3.alg")), "--cocycle", path(&file)]);
        assert_eq!(out.status.code(), Some(2), "{name}");
    }
}
