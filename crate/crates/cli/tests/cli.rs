use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const XY3: &str = "x*y^3+y*z^3+z*x^3";

fn frobetti(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frobetti")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schema")
}

fn assert_valid(doc: &Value, schema: &str) {
    let text = std::fs::read_to_string(schema_dir().join(format!("{schema}.schema.json"))).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}");
}

fn json_output(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = frobetti(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn betti_grid_and_stability() {
    let o = frobetti(&["betti", "-p", "7", "-f", XY3, "-q", "7,49"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let q7 = "q=7\n       0 1 2 3 4\ntotal: 1 3 8 8 8\n    0: 1 . . . .\n    6: . 3 . . .\n   10: . . 8 8 .\n   12: . . . . 8\n";
    assert!(text.contains(q7), "{text}");
    assert!(text.contains("tails equal after shift 63"), "{text}");
}

#[test]
fn finite_projective_dimension_totals() {
    let o = frobetti(&["betti", "-p", "5", "-f", "x^4+y^4+z^4", "-q", "25"]);
    assert!(stdout(&o).contains("total: 1 3 2 0 0\n"));
}

#[test]
fn low_degree_cap_is_a_math_failure() {
    let o = frobetti(&["betti", "-p", "7", "-f", XY3, "-q", "7", "--degree-cap", "12", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--degree-cap"));
}

#[test]
fn compressed_verdicts() {
    let o = frobetti(&["check-compressed", "-p", "5", "-f", "x*y^2+y*z^2+z*x^2", "-q", "25,125"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("q=25 s=69 compressed=true"), "{text}");
    assert!(text.contains("q=125 s=369 compressed=true"), "{text}");
}

#[test]
fn q_must_be_a_power_of_p() {
    let o = frobetti(&["check-compressed", "-p", "5", "-f", "x*y^2+y*z^2+z*x^2", "-q", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = frobetti(&["check-compressed", "-p", "5", "-f", "x*y^2+y*z^2+z*x^2", "-q", "4", "--allow-any-q"]);
    assert!(o.status.success());
}

#[test]
fn bad_inputs_are_usage_errors() {
    assert_eq!(frobetti(&["hk", "-p", "6", "-f", "x^2", "-q", "6"]).status.code(), Some(2));
    assert_eq!(frobetti(&["hk", "-p", "7", "-f", "x^2+", "-q", "7"]).status.code(), Some(2));
    assert_eq!(frobetti(&["hk", "-p", "7", "-f", "random", "-q", "7"]).status.code(), Some(2));
    assert_eq!(frobetti(&["betti", "-p", "7", "-f", XY3]).status.code(), Some(2));
}

#[test]
fn random_forms_are_reproducible() {
    let args = ["check-compressed", "-p", "5", "-f", "random", "-d", "4", "--seed", "7", "-q", "5,25"];
    let a = frobetti(&args);
    let b = frobetti(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("f = "));
    assert_eq!(text.lines().count(), 3);
    let other = frobetti(&["check-compressed", "-p", "5", "-f", "random", "-d", "4", "--seed", "8", "-q", "5"]);
    assert_ne!(stdout(&other).lines().next(), text.lines().next());
}

#[test]
fn hk_and_socle_reports() {
    let o = frobetti(&["hk", "-p", "7", "-f", XY3, "-q", "7"]);
    assert!(stdout(&o).contains("q=7 HK=142 formula=142 agree=true series=holds"));
    let o = frobetti(&["socle", "-p", "5", "-f", "x*y^2+y*z^2+z*x^2", "-q", "25"]);
    assert!(stdout(&o).contains("q=25 direct={36:1, 37:3} via-link={36:1, 37:3} agree=true"));
}

#[test]
fn pfaffian_check_reports() {
    let o = frobetti(&["pfaffian-check", "-p", "7", "-f", XY3, "-q", "7"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("A: 8x8 of degree 1"));
    assert!(stdout(&o).contains("certificate holds"));
    let o = frobetti(&["pfaffian-check", "-p", "5", "-f", "x^4+y^4+z^4", "-q", "25"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_outputs_match_schemas() {
    let betti = json_output(&["betti", "-p", "7", "-f", XY3, "-q", "7,49"]);
    assert_valid(&betti, "betti");
    assert_valid(&betti["tables"][0]["table"], "betti_table");
    assert_eq!(betti["stability"][0]["comparison"]["equal"], Value::Bool(true));
    assert_valid(
        &json_output(&["check-compressed", "-p", "7", "-f", XY3, "-q", "7", "--mode", "full"]),
        "check_compressed",
    );
    assert_valid(&json_output(&["socle", "-p", "7", "-f", XY3, "-q", "7"]), "socle");
    assert_valid(&json_output(&["hk", "-p", "5", "-f", "x^4+y^4+z^4", "-q", "5,25"]), "hk");
    assert_valid(&json_output(&["pfaffian-check", "-p", "7", "-f", XY3, "-q", "7"]), "pfaffian_check");
    assert_valid(&json_output(&["ledger", "-p", "7", "-f", XY3, "-q", "7"]), "ledger");
    assert_valid(&json_output(&["reproduce-examples", "--only", "cubic-p5-q5"]), "reproduce_examples");
}

#[test]
fn golden_files_match_schemas() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json")).unwrap()).unwrap();
    assert_valid(&manifest, "golden_manifest");
    let cases = manifest["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 12);
    for c in cases {
        let id = c["id"].as_str().unwrap();
        let table: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.join(format!("{id}.json"))).unwrap()).unwrap();
        assert_valid(&table, "betti_table");
    }
}

#[test]
fn single_golden_case() {
    let o = frobetti(&["reproduce-examples", "--only", "cubic-p5-q5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "cubic-p5-q5 pass\n");
    assert_eq!(frobetti(&["reproduce-examples", "--only", "nope"]).status.code(), Some(2));
}

#[test]
fn corrupted_golden_file_is_named() {
    let src = Path::new(env!("CARGO_MANIFEST_DIR")).join("golden");
    let dir = std::env::temp_dir().join(format!("frobetti-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for entry in std::fs::read_dir(&src).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.join(path.file_name().unwrap())).unwrap();
    }
    let grid = std::fs::read_to_string(dir.join("cubic-p5-q5.txt")).unwrap();
    std::fs::write(dir.join("cubic-p5-q5.txt"), grid.replace("7: . . 1 3 3", "7: . . 1 3 4")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_frobetti"))
        .args(["reproduce-examples", "--only", "cubic-p5-q5,fermat5-p7-q7"])
        .env("FROBETTI_GOLDEN_DIR", &dir)
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    assert!(text.contains("cubic-p5-q5 FAIL (grid)"), "{text}");
    assert!(text.contains("fermat5-p7-q7 pass"), "{text}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("golden mismatch in: cubic-p5-q5"));
}
