use std::collections::BTreeSet;

use num_traits::Signed;
use serde::Serialize;

use super::interp::{EvalError, Interpreter};
use super::value::Value;
use crate::syntax::{DefKind, Expr, ExprKind, NodeId, Program, SourceSpan, TestDef, TestKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TestStatus {
    Pass,
    Fail,
    /// Evaluation raised an error; counts as a failure.
    Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestRecord {
    pub kind: TestKind,
    pub status: TestStatus,
    /// Rendered actual value, or the error message when evaluation failed.
    pub actual: String,
    pub expected: String,
    pub span: SourceSpan,
    /// Index of the test's definition within the program.
    pub definition: usize,
}

impl TestRecord {
    pub fn passed(&self) -> bool {
        self.status == TestStatus::Pass
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TestReport {
    pub records: Vec<TestRecord>,
}

impl TestReport {
    pub fn total(&self) -> usize {
        self.records.len()
    }

    pub fn passed(&self) -> usize {
        self.records.iter().filter(|r| r.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.total() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(TestRecord::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TestRecord> {
        self.records.iter().filter(|r| !r.passed())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncoveredSpan {
    pub span: SourceSpan,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FunctionCoverage {
    pub function: String,
    pub uncovered: Vec<UncoveredSpan>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverageReport {
    pub covered: BTreeSet<NodeId>,
    /// One entry per function that has at least one uncovered expression.
    pub functions: Vec<FunctionCoverage>,
}

impl CoverageReport {
    /// Builds the report for every function body in `program`. Only the
    /// outermost unevaluated expression of each untested region is listed.
    pub fn compute(program: &Program, covered: BTreeSet<NodeId>) -> Self {
        let mut functions = Vec::new();
        for def in &program.definitions {
            if let DefKind::Function { name, body, .. } = &def.kind {
                let mut uncovered = Vec::new();
                collect_uncovered(body, &covered, program, &mut uncovered);
                if !uncovered.is_empty() {
                    functions.push(FunctionCoverage { function: name.clone(), uncovered });
                }
            }
        }
        Self { covered, functions }
    }

    pub fn is_complete(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn uncovered(&self) -> impl Iterator<Item = &UncoveredSpan> {
        self.functions.iter().flat_map(|f| f.uncovered.iter())
    }

    pub fn uncovered_in(&self, function: &str) -> &[UncoveredSpan] {
        self.functions.iter().find(|f| f.function == function).map(|f| f.uncovered.as_slice()).unwrap_or(&[])
    }
}

fn collect_uncovered(e: &Expr, covered: &BTreeSet<NodeId>, p: &Program, out: &mut Vec<UncoveredSpan>) {
    if !covered.contains(&e.id) {
        out.push(UncoveredSpan { span: e.span, text: p.text(e.span).to_string() });
        return;
    }
    for c in e.children() {
        collect_uncovered(c, covered, p, out);
    }
}

/// Runs every test of `program`: constants first, in order, then each test.
/// A failing constant aborts the run; a failing test is recorded as an error.
pub fn run_program(program: &Program, seed: u64) -> Result<(TestReport, CoverageReport), EvalError> {
    let mut interp = Interpreter::load(program, seed)?;
    let mut report = TestReport::default();
    for (index, def) in program.definitions.iter().enumerate() {
        if let DefKind::Test(test) = &def.kind {
            report.records.push(run_test(&mut interp, test, def.span, index));
        }
    }
    let coverage = CoverageReport::compute(program, interp.take_coverage());
    Ok((report, coverage))
}

/// Runs one test against an already loaded interpreter.
pub fn run_test(interp: &mut Interpreter, test: &TestDef, span: SourceSpan, index: usize) -> TestRecord {
    let record = |status, actual: String, expected: String| TestRecord {
        kind: test.kind,
        status,
        actual,
        expected,
        span,
        definition: index,
    };
    let outcome = (|| -> Result<(Value, Value, bool), EvalError> {
        match test.kind {
            TestKind::Expect => {
                let a = interp.eval(&test.actual)?;
                let e = interp.eval(&test.expected)?;
                let ok = a == e;
                Ok((a, e, ok))
            }
            TestKind::Within => {
                let a = interp.eval(&test.actual)?;
                let e = interp.eval(&test.expected)?;
                let tol_expr = test.tolerance.as_ref().expect("check-within carries a tolerance");
                let tol = match interp.eval(tol_expr)? {
                    Value::Num(t) if !t.is_negative() => t,
                    other => {
                        return Err(EvalError {
                            kind: super::interp::EvalErrorKind::Type {
                                op: "check-within".into(),
                                expected: "a non-negative tolerance".into(),
                                given: other.to_string(),
                            },
                            span: tol_expr.span,
                        })
                    }
                };
                let ok = a.within(&e, &tol);
                Ok((a, e, ok))
            }
            TestKind::Random => {
                let start = interp.rng;
                let a = interp.eval(&test.actual)?;
                interp.rng = start;
                let e = interp.eval(&test.expected)?;
                let ok = a == e;
                Ok((a, e, ok))
            }
        }
    })();
    match outcome {
        Ok((a, e, ok)) => {
            record(if ok { TestStatus::Pass } else { TestStatus::Fail }, a.to_string(), e.to_string())
        }
        Err(err) => record(TestStatus::Error, err.kind.to_string(), render_source(&test.expected)),
    }
}

fn render_source(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Var(v) => v.clone(),
        _ => crate::syntax::print_expr(e),
    }
}

#[derive(Serialize)]
struct TestJson<'a> {
    kind: &'static str,
    status: TestStatus,
    actual: &'a str,
    expected: &'a str,
    line: u32,
}

#[derive(Serialize)]
struct SpanJson<'a> {
    line: u32,
    col: u32,
    text: &'a str,
}

/// Machine-readable report:
/// `{tests:[{kind,status,actual,expected,line}], coverage:{uncovered:[{line,col,text}]}}`.
pub fn report_json(tests: &TestReport, coverage: &CoverageReport) -> serde_json::Value {
    let tests: Vec<TestJson> = tests
        .records
        .iter()
        .map(|r| TestJson {
            kind: r.kind.keyword(),
            status: r.status,
            actual: &r.actual,
            expected: &r.expected,
            line: r.span.line,
        })
        .collect();
    let uncovered: Vec<SpanJson> = coverage
        .uncovered()
        .map(|u| SpanJson { line: u.span.line, col: u.span.column, text: &u.text })
        .collect();
    serde_json::json!({ "tests": tests, "coverage": { "uncovered": uncovered } })
}

/// Human-readable rendering in the style of a teaching-language test runner.
pub fn render_report(tests: &TestReport, coverage: &CoverageReport) -> String {
    let mut out = String::new();
    let total = tests.total();
    if tests.all_passed() {
        out.push_str(&match total {
            0 => "No tests.\n".to_string(),
            1 => "The test passed!\n".to_string(),
            2 => "Both tests passed!\n".to_string(),
            n => format!("All {n} tests passed!\n"),
        });
    } else {
        out.push_str(&format!("Ran {total} tests.\n{} of the {total} tests failed.\n\n", tests.failed()));
        for r in tests.failures() {
            match r.status {
                TestStatus::Error => out.push_str(&format!(
                    "{}: {} raised an error: {}\n",
                    r.span,
                    r.kind.keyword(),
                    r.actual
                )),
                _ => out.push_str(&format!(
                    "{}: Actual value {} differs from {}, the expected value.\n",
                    r.span, r.actual, r.expected
                )),
            }
        }
    }
    if !coverage.is_complete() {
        out.push_str("\nUntested code:\n");
        for f in &coverage.functions {
            for u in &f.uncovered {
                out.push_str(&format!("  {} in {}: {}\n", u.span, f.function, u.text));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_program;

    #[test]
    fn check_within_recurses() {
        let p = parse_program("(check-within (make-posn 1.01 2) (make-posn 1 2) 0.02)").unwrap();
        let (r, _) = run_program(&p, 0).unwrap();
        assert!(r.all_passed());
        let p = parse_program("(check-within (make-posn 1.5 2) (make-posn 1 2) 0.02)").unwrap();
        let (r, _) = run_program(&p, 0).unwrap();
        assert_eq!(r.failed(), 1);
    }

    #[test]
    fn negative_tolerance_is_an_error() {
        let p = parse_program("(check-within 1 1 -1)").unwrap();
        let (r, _) = run_program(&p, 0).unwrap();
        assert_eq!(r.records[0].status, TestStatus::Error);
    }

    #[test]
    fn check_random_replays_stream() {
        let p = parse_program("(check-random (+ (random 10) (random 10)) (+ (random 10) (random 10)))").unwrap();
        let (r, _) = run_program(&p, 1).unwrap();
        assert!(r.all_passed());
        let p = parse_program("(check-expect (random 1000000) (random 1000000))").unwrap();
        let (r, _) = run_program(&p, 1).unwrap();
        assert!(!r.all_passed());
    }

    #[test]
    fn test_errors_do_not_abort() {
        let p = parse_program("(check-expect (/ 1 0) 1)\n(check-expect 1 1)").unwrap();
        let (r, _) = run_program(&p, 0).unwrap();
        assert_eq!(r.records[0].status, TestStatus::Error);
        assert_eq!(r.records[1].status, TestStatus::Pass);
    }

    #[test]
    fn constant_errors_abort() {
        let p = parse_program("(define A (/ 1 0))\n(check-expect 1 1)").unwrap();
        assert!(run_program(&p, 0).is_err());
    }

    #[test]
    fn json_shape() {
        let p = parse_program("(define (f x) (cond [(< x 0) 0] [else x]))\n(check-expect (f 1) 2)").unwrap();
        let (r, c) = run_program(&p, 0).unwrap();
        let j = report_json(&r, &c);
        assert_eq!(j["tests"][0]["kind"], "check-expect");
        assert_eq!(j["tests"][0]["status"], "fail");
        assert_eq!(j["tests"][0]["actual"], "1");
        assert_eq!(j["tests"][0]["line"], 2);
        assert_eq!(j["coverage"]["uncovered"][0]["text"], "0");
        assert!(render_report(&r, &c).contains("Untested code"));
    }
}
