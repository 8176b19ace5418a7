use std::f64::consts::TAU;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_weil");
const SCHEMA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/weil-output.schema.json");
const FLOAT_TOL: f64 = 1e-9;

fn run(args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .env_remove("WEIL_MAX_CELLS")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(SCHEMA).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

/// Float value of an exact entry, straight from its coefficient strings.
fn exact_to_float(x: &Value) -> (f64, f64) {
    let p = x["p"].as_u64().unwrap() as f64;
    let mut re = 0.0;
    let mut im = 0.0;
    for (k, c) in x["coeffs"].as_array().unwrap().iter().enumerate() {
        let num: f64 = c[0].as_str().unwrap().parse().unwrap();
        let den: f64 = c[1].as_str().unwrap().parse().unwrap();
        let angle = TAU * k as f64 / p;
        re += num / den * angle.cos();
        im += num / den * angle.sin();
    }
    (re, im)
}

fn assert_close(exact: &Value, float: &Value) {
    let (re, im) = exact_to_float(exact);
    let (fre, fim) = (float["re"].as_f64().unwrap(), float["im"].as_f64().unwrap());
    assert!((re - fre).abs() < FLOAT_TOL && (im - fim).abs() < FLOAT_TOL, "{exact} vs {float}");
}

fn assert_matrices_close(exact: &Value, float: &Value) {
    let (e, f) = (exact.as_array().unwrap(), float.as_array().unwrap());
    assert_eq!(e.len(), f.len());
    for (er, fr) in e.iter().zip(f) {
        for (x, y) in er.as_array().unwrap().iter().zip(fr.as_array().unwrap()) {
            assert_close(x, y);
        }
    }
}

#[test]
fn gauss_reports_the_p3_example() {
    let out = run(&["gauss", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["gauss_sum_unreduced"], "1 + 2ζ^2");
    assert_eq!(doc["gauss_sum_text"], "-1 - 2ζ");
    assert_eq!(doc["square_text"], "-3");
    assert_eq!(doc["verdict"], "PASS");
}

#[test]
fn oriented_lagrangians_at_p3() {
    let doc = json_of(&run(&["lagrangians", "--p", "3", "--dim", "2", "--oriented"]));
    assert_eq!(doc["count"], 8);
    assert_eq!(doc["lagrangians"][0], "rows=0,1|o=1");
    let doc = json_of(&run(&["lagrangians", "--p", "3", "--dim", "4"]));
    assert_eq!(doc["count"], 40);
}

#[test]
fn multiplicativity_suite_runs_512_triples() {
    let out = run(&["verify", "--suite", "multiplicativity", "--p", "3", "--dim", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    let triples = &doc["checks"][0];
    assert_eq!(triples["name"], "triples");
    assert_eq!(triples["cases"], 512);
    assert_eq!(triples["exhaustive"], true);
}

#[test]
fn every_document_validates_against_the_schema() {
    let v = validator();
    let cases: Vec<Vec<&str>> = vec![
        vec!["gauss", "--p", "5", "--dim", "4"],
        vec!["lagrangians", "--oriented"],
        vec!["intertwiner", "--from", "rows=1,0|o=1", "--to", "rows=0,1|o=2", "--check"],
        vec!["kernel", "--from", "rows=1,0|o=1", "--to", "rows=1,1|o=1"],
        vec!["rep", "--element", "g=0,1;2,0"],
        vec!["reduce", "--dim", "4", "--isotropic", "rows=0,1,0,0|o=2"],
        vec!["pair", "--at", "rows=1,2|o=1"],
        vec!["tensor", "--samples", "5"],
        vec!["verify", "--suite", "duality"],
    ];
    for args in cases {
        for format in ["json", "float"] {
            let mut full = args.clone();
            full.extend(["--format", format]);
            let out = run(&full);
            assert_eq!(out.status.code(), Some(0), "{full:?}: {}", String::from_utf8_lossy(&out.stderr));
            let doc = json_of(&out);
            let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
            assert!(errors.is_empty(), "{full:?}: {errors:?}");
        }
    }
}

#[test]
fn float_renderings_agree_with_exact_values() {
    let doc = json_of(&run(&["intertwiner", "--p", "5", "--from", "rows=1,0|o=1", "--to", "rows=1,3|o=2", "--format", "float"]));
    assert_matrices_close(&doc["matrix"], &doc["float_matrix"]);
    let doc = json_of(&run(&["rep", "--p", "7", "--element", "g=2,0;0,4", "--format", "float"]));
    assert_matrices_close(&doc["matrix"], &doc["float_matrix"]);
    let doc = json_of(&run(&["pair", "--dim", "4", "--format", "float"]));
    assert_matrices_close(&doc["gram"], &doc["float_gram"]);
    let doc = json_of(&run(&["gauss", "--p", "7", "--format", "float"]));
    for key in ["gauss_sum", "square", "power", "expected"] {
        assert_close(&doc[key], &doc["float"][key]);
    }
    let doc = json_of(&run(&["kernel", "--from", "rows=0,1|o=1", "--to", "rows=1,0|o=2", "--format", "float"]));
    for entry in doc["support"].as_array().unwrap() {
        assert_close(&entry["value"], &entry["float"]);
    }
}

#[test]
fn intertwiner_check_compares_closed_form_and_chain() {
    let doc = json_of(&run(&["intertwiner", "--from", "rows=1,1|o=2", "--to", "rows=1,1|o=1", "--check"]));
    assert_eq!(doc["agree"], true);
    assert_eq!(doc["matrix"], doc["chained"]);
}

#[test]
fn reduce_reports_invariant_dimension() {
    let doc = json_of(&run(&["reduce", "--dim", "4", "--isotropic", "rows=1,0,0,0|o=1"]));
    assert_eq!(doc["invariant_dim"], 3);
    assert_eq!(doc["expected_dim"], 3);
    assert_eq!(doc["invertible"], true);
}

#[test]
fn usage_and_config_errors_exit_2() {
    for args in [
        vec!["gauss", "--bogus"],
        vec!["frobnicate"],
        vec!["gauss", "--p", "9"],
        vec!["gauss", "--p", "11"],
        vec!["gauss", "--dim", "3"],
        vec!["gauss", "--dim", "6"],
        vec!["verify", "--suite", "nope"],
        vec!["intertwiner", "--from", "rows=1,0|o=0", "--to", "rows=0,1|o=1"],
        vec!["intertwiner", "--from", "rows=1,0,0,0|o=1", "--to", "rows=0,1|o=1"],
        vec!["rep", "--element", "g=1,1;1,1"],
        vec!["reduce", "--dim", "4", "--isotropic", "rows=1,0,0,0;0,0,1,0|o=1"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn scale_guard_is_overridable() {
    let lowered = Command::new(BIN)
        .args(["lagrangians", "--dim", "4"])
        .env("WEIL_MAX_CELLS", "80")
        .output()
        .unwrap();
    assert_eq!(lowered.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&lowered.stderr);
    assert!(msg.contains("scale guard") && msg.contains("81"), "{msg}");
    let exact = Command::new(BIN)
        .args(["lagrangians", "--dim", "4"])
        .env("WEIL_MAX_CELLS", "81")
        .output()
        .unwrap();
    assert_eq!(exact.status.code(), Some(0));
    let garbage = Command::new(BIN).arg("gauss").env("WEIL_MAX_CELLS", "lots").output().unwrap();
    assert_eq!(garbage.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.csv");
    let args = ["rep", "--p", "5", "--element", "g=1,2;0,1", "--format", "csv"];
    let stdout = run(&args).stdout;
    let mut with_out = args.to_vec();
    let path_str = path.to_str().unwrap();
    with_out.extend(["--out", path_str]);
    let out = run(&with_out);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    assert_eq!(String::from_utf8(stdout).unwrap().lines().count(), 5);
}

#[test]
fn csv_reports_have_one_row_per_check() {
    let out = run(&["verify", "--suite", "svn", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "suite,check,cases,failures,exhaustive,passed");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.starts_with("svn,") && l.ends_with(",true")));
}

#[test]
fn sampled_runs_depend_only_on_the_seed() {
    let args = |seed: &'static str| ["verify", "--suite", "egorov", "--p", "5", "--samples", "30", "--seed", seed];
    assert_eq!(run(&args("3")).stdout, run(&args("3")).stdout);
    assert_ne!(run(&args("3")).stdout, run(&args("4")).stdout);
}
