use std::path::PathBuf;

use recipe_cli::run;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name).display().to_string()
}

fn recipe(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("recipe").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_area_passes() {
    let (code, out, _) = recipe(&["check", &corpus("rect-area.rkt"), "--function", "rect-area"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("overall: pass"));
}

#[test]
fn check_json_matches_exit_code() {
    let (code, out, _) = recipe(&["check", &corpus("rect-area-bad-test.rkt"), "--function", "rect-area", "--json"]);
    assert_eq!(code, 1);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["overall"], "fail");
    assert_eq!(j["steps"][8]["status"], "fail");
}

#[test]
fn check_unknown_function_is_usage_error() {
    let (code, _, err) = recipe(&["check", &corpus("rect-area.rkt"), "--function", "area"]);
    assert_eq!(code, 2);
    assert!(err.contains("area"));
}

#[test]
fn test_missing_left_names_clause() {
    let (code, out, _) = recipe(&["test", &corpus("move-rocket-missing-left.rkt")]);
    assert_eq!(code, 1);
    assert!(out.contains("(move-rocket-left a-rocket)"), "{out}");
    let (code, out, _) = recipe(&["test", &corpus("move-rocket-missing-left.rkt"), "--json"]);
    assert_eq!(code, 1);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(j["coverage"]["uncovered"].as_array().unwrap().iter().any(|u| u["text"] == "(move-rocket-left a-rocket)"));
    assert!(j["tests"].as_array().unwrap().iter().all(|t| t["status"] == "pass"));
}

#[test]
fn test_passing_corpus() {
    for f in ["rect-area.rkt", "consumed.rkt", "move-rocket.rkt", "piecewise.rkt"] {
        let (code, out, err) = recipe(&["test", &corpus(f)]);
        assert_eq!(code, 0, "{f}: {out}{err}");
    }
}

#[test]
fn test_runtime_error_fails() {
    let (code, _, err) = recipe(&["test", &corpus("draw-world-raw.rkt")]);
    assert_eq!(code, 1);
    assert!(!err.is_empty());
}

#[test]
fn abstract_area() {
    let (code, out, _) = recipe(&["abstract", &corpus("area-samples.rkt"), "--name", "rect-area", "--params", "length,width"]);
    assert_eq!(code, 0);
    assert!(out.contains("(define (rect-area length width)\n  (* length width))"), "{out}");
    assert!(out.contains("; ℝ≥0 ℝ≥0 → ℝ≥0"));
    recipe_core::syntax::parse_program(&out).unwrap();
}

#[test]
fn abstract_json() {
    let (code, out, _) = recipe(&["abstract", &corpus("area-samples.rkt"), "--name", "rect-area", "--json"]);
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["body"], "(* n1 n2)");
    assert_eq!(j["params"][0]["type"], "ℝ≥0");
    assert_eq!(j["tests"].as_array().unwrap().len(), 3);
}

#[test]
fn abstract_then_check_round_trip() {
    let (_, scaffold, _) =
        recipe(&["abstract", &corpus("area-samples.rkt"), "--name", "rect-area", "--params", "length,width"]);
    let completed = scaffold.replace(
        "; TODO: add tests with new concrete values",
        "(check-expect (rect-area 2 7) 14)",
    );
    let dir = std::env::temp_dir().join(format!("recipe-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("scaffold.rkt");
    std::fs::write(&path, completed).unwrap();
    let (code, out, _) = recipe(&["check", path.to_str().unwrap(), "--function", "rect-area"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn abstract_shape_error_fails() {
    let dir = std::env::temp_dir().join(format!("recipe-cli-shape-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.rkt");
    std::fs::write(&path, "(define A (cond [(< 1 2) 3] [else 4]))\n(define B (and #true #false))\n").unwrap();
    let (code, _, err) = recipe(&["abstract", path.to_str().unwrap(), "--name", "f"]);
    assert_eq!(code, 1);
    assert!(err.contains("same manner"), "{err}");
}

#[test]
fn abstract_posns_are_single_values() {
    let (code, out, _) = recipe(&[
        "abstract",
        &corpus("consumed.rkt"),
        "--name",
        "consumed?",
        "--samples",
        "EATEN,NOTEATEN",
        "--params",
        "a-rocket,a-fuel",
        "--json",
    ]);
    assert_eq!(code, 0, "{out}");
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["params"].as_array().unwrap().len(), 2);
    assert_eq!(j["return"], "Boolean");
}

#[test]
fn parse_round_trips() {
    let (code, out, _) = recipe(&["parse", &corpus("move-rocket.rkt")]);
    assert_eq!(code, 0);
    let again = recipe_core::syntax::parse_program(&out).unwrap();
    let original = recipe_core::syntax::parse_program(&std::fs::read_to_string(corpus("move-rocket.rkt")).unwrap()).unwrap();
    assert!(again.same_code(&original));
    let (code, out, _) = recipe(&["parse", &corpus("rect-area.rkt"), "--json"]);
    assert_eq!(code, 0);
    let j: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["definitions"][8]["name"], "rect-area");
}

#[test]
fn parse_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("recipe-cli-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.rkt");
    std::fs::write(&path, "(define (f x) (+ x 1)").unwrap();
    let (code, _, err) = recipe(&["parse", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("1:"), "{err}");
    let (code, _, _) = recipe(&["test", "/nonexistent/file.rkt"]);
    assert_eq!(code, 2);
    let (code, _, _) = recipe(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, _) = recipe(&["check", &corpus("rect-area.rkt")]);
    assert_eq!(code, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = recipe(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("abstract"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_recipe");
    let status = std::process::Command::new(bin)
        .args(["check", &corpus("rect-area.rkt"), "--function", "rect-area"])
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let status = std::process::Command::new(bin).args(["test", &corpus("move-rocket-missing-left.rkt")]).output().unwrap();
    assert_eq!(status.status.code(), Some(1));
}
