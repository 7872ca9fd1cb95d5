use std::path::PathBuf;
use std::process::Command;

use alr_cli::report::canonical_generators;
use alr_cli::workspace::{Object, Workspace};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Runs `alr` with the given arguments and stdin; returns exit code and stdout.
fn alr(args: &[&str], stdin: Option<&str>) -> (i32, String) {
    use std::io::Write;
    use std::process::Stdio;
    let mut child = Command::new(env!("CARGO_BIN_EXE_alr"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json_of(args: &[&str], stdin: Option<&str>) -> (i32, Value) {
    let (code, out) = alr(args, stdin);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

fn heisenberg() -> String {
    fixture("heisenberg.alr").display().to_string()
}

fn nilpotent() -> String {
    fixture("nilpotent-matrix.alr").display().to_string()
}

#[test]
fn validate_heisenberg() {
    let (code, v) = json_of(&["validate", "--input", &heisenberg()], None);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["result"]["objects"]["rings"].as_array().unwrap().len(), 1);
    assert_eq!(v["result"]["objects"]["modules"].as_array().unwrap().len(), 1);
}

#[test]
fn heisenberg_adjoint_cohomology() {
    let (code, v) = json_of(&["cohomology", "adj", "--input", &heisenberg()], None);
    assert_eq!(code, 0);
    let h1 = &v["result"]["h1"];
    assert_eq!((h1["r"].as_u64(), h1["t"].as_u64(), h1["rational_dim"].as_u64()), (Some(6), Some(2), Some(4)));
    assert_eq!(v["result"]["h0"]["subgroup"]["generators"], serde_json::json!([[0, 0, 1]]));
    assert_eq!(v["result"]["classical"]["rational"]["h1"], 4);
    // --object stands in for the positional argument
    let (_, w) = json_of(&["cohomology", "--object", "adj", "--input", &heisenberg()], None);
    assert_eq!(v, w);
}

#[test]
fn nilpotent_matrix_sequence_is_exact() {
    for seq in ["S", "T"] {
        let (code, v) = json_of(&["sequence", seq, "--input", &nilpotent()], None);
        assert_eq!(code, 0, "{v}");
        let js = v["result"]["junctions"].as_array().unwrap();
        assert_eq!(js.len(), 5);
        assert!(js.iter().all(|j| j["verdict"] == "EXACT"), "{v}");
        let d = v["result"]["delta1"].as_array().unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0]["image"]["zero"], false);
    }
}

const JACOBI: &str = r#"{
  "schema_version": "1",
  "rings": [
    {
      "name": "broken",
      "generators": ["a", "b", "c"],
      "bracket": [
        { "left": "a", "right": "b", "value": [0, 1, 0] },
        { "left": "a", "right": "c", "value": [0, 0, 1] },
        { "left": "b", "right": "c", "value": [1, 0, 0] }
      ]
    }
  ]
}"#;

#[test]
fn jacobi_violation_names_the_triple() {
    let (code, v) = json_of(&["validate"], Some(JACOBI));
    assert_eq!(code, 1);
    let e = &v["error"]["errors"][0];
    assert_eq!(e["axiom"], "jacobi");
    assert_eq!(e["object"], "broken");
    assert_eq!(e["line"], 5);
    assert!(e["witness"].as_str().unwrap().contains("(a, b, c)"), "{e}");
}

#[test]
fn duplicate_and_dangling_names_are_rejected() {
    let doc = r#"{
  "rings": [
    { "name": "r", "generators": ["x"] },
    { "name": "r", "generators": ["y"] }
  ],
  "modules": [ { "name": "m", "ring": "s", "kind": "adjoint" } ]
}"#;
    let (code, v) = json_of(&["validate"], Some(doc));
    assert_eq!(code, 1);
    let errs = v["error"]["errors"].as_array().unwrap();
    assert_eq!(errs[0]["kind"], "duplicate");
    assert_eq!(errs[0]["line"], 4);
    assert_eq!(errs[1]["kind"], "reference");
    assert_eq!(errs[1]["object"], "m");
}

#[test]
fn syntax_errors_are_located() {
    let (code, v) = json_of(&["validate"], Some("{\n  \"rings\": [\n"));
    assert_eq!(code, 1);
    assert_eq!(v["error"]["errors"][0]["kind"], "syntax");
}

#[test]
fn print_round_trips() {
    for path in [heisenberg(), nilpotent()] {
        let src = std::fs::read_to_string(&path).unwrap();
        let ws = Workspace::parse(&src).unwrap();
        let printed = ws.print();
        let again = Workspace::parse(&printed).unwrap();
        assert_eq!(again.print(), printed);
        assert_eq!(again.canonical_document(), ws.canonical_document());
        for name in ws.names_of_kind("subgroup") {
            let (Some(Object::Subgroup { subgroup: a, .. }), Some(Object::Subgroup { subgroup: b, .. })) =
                (ws.get(&name), again.get(&name))
            else {
                panic!("{name}")
            };
            assert_eq!(a.lattice(), b.lattice());
            assert_eq!(canonical_generators(a), canonical_generators(b));
        }
        let (code, out) = alr(&["print"], Some(&printed));
        assert_eq!(code, 0);
        assert_eq!(out, printed + "\n");
    }
}

#[test]
fn reports_are_byte_identical() {
    let runs: Vec<&[&str]> = vec![
        &["oracle", "sample", "contained", "C", "A", "--seed", "7"],
        &["invariants", "h3"],
        &["sequence", "S", "--format", "text"],
        &["check", "res-image-central", "adj", "A"],
    ];
    for args in runs {
        let mut full: Vec<&str> = args.to_vec();
        let input = heisenberg();
        full.extend(["--input", input.as_str()]);
        let (c1, a) = alr(&full, None);
        let (c2, b) = alr(&full, None);
        assert_eq!((c1, &a), (c2, &b));
    }
}

#[test]
fn text_report_is_derived_from_json() {
    let (_, text) = alr(&["cohomology", "adj", "--input", &heisenberg(), "--format", "text"], None);
    assert!(text.contains("status: ok"));
    assert!(text.contains("rational_dim: 4"));
    assert!(text.contains("verdict: POSITIVE(4)"));
}

#[test]
fn exit_codes() {
    let h = heisenberg();
    assert_eq!(alr(&["validate", "--input", &h], None).0, 0);
    // hypothesis failure: the adjoint centre is infinite
    let (code, v) = json_of(&["check", "five-term", "adj", "C", "--input", &h], None);
    assert_eq!((code, v["status"].as_str()), (1, Some("hypothesis_violated")));
    // usage errors
    assert_eq!(alr(&["frobnicate"], None).0, 3);
    assert_eq!(alr(&["cohomology", "missing", "--input", &h], None).0, 3);
    assert_eq!(alr(&["almost", "sideways", "C", "--input", &h], None).0, 3);
    assert_eq!(alr(&["almost", "contained", "C", "--input", &h], None).0, 3);
    assert_eq!(alr(&["validate", "--input", "/nonexistent/doc.alr"], None).0, 3);
    // an almost query across different carriers
    let (code, v) = json_of(&["almost", "contained", "C", "nilpotent", "--input", &h], None);
    assert_eq!((code, v["status"].as_str()), (3, Some("usage_error")));
}

const MOD_THREE: &str = r#"{
  "rings": [
    {
      "name": "h",
      "generators": ["x", "y", "z"],
      "relations": [[3, 0, 0], [0, 3, 0], [0, 0, 3]],
      "bracket": [ { "left": "x", "right": "y", "value": [0, 0, 1] } ]
    }
  ],
  "modules": [ { "name": "adj", "ring": "h", "kind": "adjoint" } ],
  "subgroups": [ { "name": "X", "of": "h", "generators": [[1, 0, 0]] } ]
}"#;

#[test]
fn oracles_agree_on_a_finite_ring() {
    for args in [
        vec!["oracle", "enumerate", "h", "center"],
        vec!["oracle", "enumerate", "h", "nilpotent"],
        vec!["oracle", "enumerate", "h", "normaliser", "X"],
        vec!["oracle", "enumerate", "h", "centraliser", "X", "h"],
        vec!["oracle", "classical", "adj"],
        vec!["oracle", "solve", "adj"],
    ] {
        let (code, v) = json_of(&args, Some(MOD_THREE));
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["result"]["agree"], true);
    }
    let (_, v) = json_of(&["oracle", "enumerate", "h", "center"], Some(MOD_THREE));
    assert_eq!(v["result"]["elements"], 3);
    let (code, v) = json_of(&["oracle", "enumerate", "h", "center", "--oracle-bound", "10"], Some(MOD_THREE));
    assert_eq!((code, v["status"].as_str()), (1, Some("hypothesis_violated")));
    let (_, v) = json_of(&["invariants", "h"], Some(MOD_THREE));
    assert_eq!(v["result"]["characteristic"], "3");
    assert_eq!(v["result"]["lower_central_series"]["nilpotency"], "NILPOTENT(2)");
    let (_, v) = json_of(&["cohomology", "adj"], Some(MOD_THREE));
    assert_eq!(v["result"]["classical"]["prime"]["p"], 3);
    assert_eq!(v["result"]["h1"]["verdict"], "TRIVIAL");
}

#[test]
fn field_oracle_and_reducible_modulus() {
    let (code, v) = json_of(&["oracle", "field", "5", "3"], Some("{}"));
    assert_eq!((code, &v["result"]["derivations"]), (0, &Value::from(0)));
    // x^2 + 1 = (x + 1)^2 over F_2
    let (code, v) = json_of(&["oracle", "field", "2", "2", "1", "0", "1"], Some("{}"));
    assert_eq!((code, v["status"].as_str()), (1, Some("hypothesis_violated")));
}
