use recipe_core::corpus;
use recipe_core::eval::run_program;
use recipe_core::recipe::{check_recipe, RecipeConfig, Status};
use recipe_core::syntax::parse_program;

fn check(src: &str, function: &str) -> recipe_core::recipe::RecipeReport {
    let p = parse_program(src).unwrap();
    check_recipe(&p, function, &RecipeConfig::default()).unwrap()
}

fn statuses(r: &recipe_core::recipe::RecipeReport) -> Vec<Status> {
    r.steps.iter().map(|s| s.status).collect()
}

#[test]
fn area_passes_every_step() {
    let r = check(corpus::RECT_AREA, "rect-area");
    assert!(r.passed(), "{}", r.render());
    assert!(r.steps.iter().all(|s| s.status == Status::Pass), "{}", r.render());
}

#[test]
fn mismatched_area_test_fails_step_nine() {
    let r = check(corpus::RECT_AREA_BAD_TEST, "rect-area");
    assert_eq!(r.step(9).status, Status::Fail, "{}", r.render());
    assert!(r.step(9).diagnostics.iter().any(|d| d.span.line == 12), "{}", r.render());
    assert_eq!(r.step(7).status, Status::Warn);
    for n in [1, 2, 3, 4, 5, 6, 8] {
        assert_eq!(r.step(n).status, Status::Pass, "step {n}\n{}", r.render());
    }
}

#[test]
fn consumed_passes() {
    let r = check(corpus::CONSUMED, "consumed?");
    assert!(r.passed(), "{}", r.render());
    let r = check(corpus::CONSUMED, "distance-on-x");
    assert!(!r.passed());
}

#[test]
fn eaten_raw_tests_do_not_apply_function() {
    let r = check(corpus::EATEN_RAW, "consumed?");
    assert_eq!(r.step(1).status, Status::Fail);
    assert_eq!(r.step(7).status, Status::Fail);
    assert!(r.step(7).diagnostics[0].message.contains("eaten?"), "{}", r.render());
}

#[test]
fn move_rocket_passes() {
    let r = check(corpus::MOVE_ROCKET, "move-rocket");
    assert!(r.passed(), "{}", r.render());
    assert!(statuses(&r).iter().all(|s| *s == Status::Pass));
}

#[test]
fn missing_left_fails_tests_and_coverage() {
    let r = check(corpus::MOVE_ROCKET_MISSING_LEFT, "move-rocket");
    assert_eq!(r.step(7).status, Status::Fail, "{}", r.render());
    assert_eq!(r.step(9).status, Status::Fail, "{}", r.render());
    assert!(r.step(9).diagnostics.iter().any(|d| d.message.contains("move-rocket-left")));
    for n in [1, 2, 3, 4, 5, 6, 8] {
        assert_eq!(r.step(n).status, Status::Pass, "step {n}\n{}", r.render());
    }
}

#[test]
fn raw_move_rocket_samples_have_an_extra_difference() {
    let r = check(corpus::MOVE_ROCKET_RAW, "move-rocket");
    assert_eq!(r.step(3).status, Status::Fail, "{}", r.render());
    assert_eq!(r.step(9).status, Status::Fail);
}

#[test]
fn unknown_function() {
    let p = parse_program(corpus::RECT_AREA).unwrap();
    assert!(check_recipe(&p, "area", &RecipeConfig::default()).is_err());
}

#[test]
fn missing_signature_and_purpose() {
    let src = corpus::RECT_AREA.replace("; ℝ≥0 ℝ≥0 → ℝ≥0\n", "").replace("; Purpose: To compute the are of a rectangle from the given length and width\n", "");
    let r = check(&src, "rect-area");
    assert_eq!(r.step(4).status, Status::Fail);
    assert_eq!(r.step(5).status, Status::Fail);
    assert_eq!(r.step(9).status, Status::Pass);
}

#[test]
fn wrong_signature_and_short_names() {
    let src = corpus::RECT_AREA.replace("; ℝ≥0 ℝ≥0 → ℝ≥0", "; ℝ≥0 String → ℝ≥0").replace("(rect-area length width)\n  (* length width)", "(rect-area l width)\n  (* l width)");
    let r = check(&src, "rect-area");
    assert_eq!(r.step(4).status, Status::Fail, "{}", r.render());
    assert_eq!(r.step(3).status, Status::Warn);
    assert_eq!(r.step(8).status, Status::Pass);
}

#[test]
fn body_differs_from_samples() {
    let src = corpus::RECT_AREA.replace("(* length width))", "(+ length width))");
    let r = check(&src, "rect-area");
    assert_eq!(r.step(8).status, Status::Fail);
    assert_eq!(r.step(9).status, Status::Fail);
    let d = &r.step(8).diagnostics[0];
    assert_eq!(d.span.line, 16, "{}", r.render());
}

#[test]
fn literal_sample_fails_step_one() {
    let src = corpus::RECT_AREA.replace("(define AREA1 (* 10 5))", "(define AREA1 50)");
    let r = check(&src, "rect-area");
    assert_eq!(r.step(1).status, Status::Fail);
    assert!(r.step(1).diagnostics[0].message.contains("AREA1"));
}

#[test]
fn no_fresh_tests() {
    let src = corpus::RECT_AREA
        .replace("(check-expect (rect-area 2 7) 14)\n", "")
        .replace("(check-expect (rect-area 50 5) 250)\n", "");
    let r = check(&src, "rect-area");
    assert_eq!(r.step(7).status, Status::Fail);
    assert_eq!(statuses(&r).iter().filter(|s| **s == Status::Fail).count(), 1, "{}", r.render());
}

#[test]
fn json_shape() {
    let r = check(corpus::RECT_AREA_BAD_TEST, "rect-area");
    let j = r.to_json();
    assert_eq!(j["function"], "rect-area");
    assert_eq!(j["overall"], "fail");
    assert_eq!(j["steps"].as_array().unwrap().len(), 9);
    assert_eq!(j["steps"][8]["status"], "fail");
    assert!(j["steps"][8]["diagnostics"][0]["line"].is_u64());
}

#[test]
fn corpus_runs() {
    for (name, src) in [("piecewise", corpus::PIECEWISE), ("move-rocket", corpus::MOVE_ROCKET), ("consumed", corpus::CONSUMED)] {
        let p = parse_program(src).unwrap();
        let (tests, coverage) = run_program(&p, 0).unwrap();
        assert!(tests.all_passed(), "{name}: {:?}", tests.failures().collect::<Vec<_>>());
        assert!(coverage.is_complete(), "{name}: {:?}", coverage.functions);
    }
    let raw = parse_program(corpus::DRAW_WORLD_RAW).unwrap();
    assert!(run_program(&raw, 0).is_err());
}
