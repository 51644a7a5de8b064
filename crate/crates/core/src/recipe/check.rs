use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use super::alpha::match_template;
use super::report::{Diagnostic, RecipeReport, Severity, StepVerdict};
use crate::abstraction::{default_atomic_forms, generalize, Generalization};
use crate::eval::{run_program, run_test, Interpreter, TestStatus, Value};
use crate::signature::{infer_type_with_limit, parse_signature_comment, AliasMap, Signature, DEFAULT_ENUM_LIMIT};
use crate::syntax::{print_expr, DefKind, Definition, Expr, ExprKind, FunctionDef, Program, SourceSpan, TestDef};

#[derive(Debug, Clone)]
pub struct RecipeConfig {
    pub atomic_forms: BTreeSet<String>,
    pub aliases: AliasMap,
    pub seed: u64,
    pub enum_limit: usize,
}

impl Default for RecipeConfig {
    fn default() -> Self {
        Self { atomic_forms: default_atomic_forms(), aliases: AliasMap::new(), seed: 0, enum_limit: DEFAULT_ENUM_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("`{0}` is not defined as a function in this program")]
pub struct UnknownFunction(pub String);

/// Audits how `function` was designed, one verdict per recipe step.
pub fn check_recipe(program: &Program, function: &str, config: &RecipeConfig) -> Result<RecipeReport, UnknownFunction> {
    let def = program
        .definitions
        .iter()
        .find(|d| matches!(&d.kind, DefKind::Function { name, .. } if name == function))
        .ok_or_else(|| UnknownFunction(function.to_string()))?;
    let f = program.function(function).expect("definition found above");
    let mut ctx = Checker { program, def, f, config, steps: (1..=9).map(StepVerdict::new).collect() };
    ctx.run();
    Ok(RecipeReport::new(function, ctx.steps))
}

struct Sample<'p> {
    name: String,
    body: &'p Expr,
    span: SourceSpan,
}

struct Checker<'p> {
    program: &'p Program,
    def: &'p Definition,
    f: FunctionDef,
    config: &'p RecipeConfig,
    steps: Vec<StepVerdict>,
}

impl<'p> Checker<'p> {
    fn fail(&mut self, step: usize, message: impl Into<String>, span: SourceSpan) {
        self.steps[step - 1].push(Diagnostic::new(Severity::Fail, message, span));
    }

    fn warn(&mut self, step: usize, message: impl Into<String>, span: SourceSpan) {
        self.steps[step - 1].push(Diagnostic::new(Severity::Warn, message, span));
    }

    /// Tests whose actual operand applies the function under audit.
    fn tests_of_fn(&self) -> Vec<(&'p Definition, &'p TestDef)> {
        self.program.tests().filter(|(_, t)| t.applied_function() == Some(self.f.name.as_str())).collect()
    }

    fn run(&mut self) {
        let samples = self.step1();
        let g = self.step2(&samples);
        self.step3(g.as_ref());
        self.step5();

        // Hole i is filled by parameter mapping[i]; positional until the body
        // says otherwise.
        let mapping = match &g {
            Some(g) => self.step8(g),
            None => {
                self.fail(8, "cannot compare the body with the samples until Steps 1 and 2 pass", self.f.body.span);
                None
            }
        };
        let mapping = mapping.or_else(|| {
            g.as_ref().filter(|g| g.holes.len() == self.f.params.len()).map(|g| (0..g.holes.len()).collect())
        });
        self.step4(&samples, g.as_ref(), mapping.as_deref());
        self.step6(g.as_ref());
        self.step7(&samples, g.as_ref(), mapping.as_deref());
        self.step9();
    }

    fn step1(&mut self) -> Vec<Sample<'p>> {
        let mut seen = HashSet::new();
        let mut samples = Vec::new();
        for (_, t) in self.tests_of_fn() {
            let ExprKind::Var(name) = &t.expected.kind else { continue };
            let Some(constant) = self.program.definition(name) else { continue };
            let DefKind::Constant { body, .. } = &constant.kind else { continue };
            if seen.insert(name.clone()) {
                samples.push(Sample { name: name.clone(), body, span: constant.span });
            }
        }
        for s in &samples {
            if !s.body.is_compound() {
                let msg = format!(
                    "{} is defined as the value {}; a sample expression must show how the value is computed",
                    s.name,
                    print_expr(s.body)
                );
                self.fail(1, msg, s.span);
            }
        }
        if samples.len() < 2 {
            let found = samples.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(", ");
            let mut msg = format!(
                "need at least two constants holding sample expressions and used as expected values in tests of {}; found {}",
                self.f.name,
                if found.is_empty() { "none".to_string() } else { found }
            );
            if self.tests_of_fn().is_empty() {
                msg.push_str(&format!("; no test applies {}", self.f.name));
            }
            self.fail(1, msg, self.def.span);
        }
        samples
    }

    fn step2(&mut self, samples: &[Sample<'p>]) -> Option<Generalization> {
        if samples.len() < 2 {
            self.fail(2, "differences can only be identified between at least two sample expressions", self.def.span);
            return None;
        }
        let bodies: Vec<Expr> = samples.iter().map(|s| s.body.clone()).collect();
        match generalize(&bodies, &self.config.atomic_forms) {
            Ok(g) if g.holes.is_empty() => {
                let span = samples[0].span;
                self.fail(2, "the sample expressions are identical, so there are no differences to abstract", span);
                None
            }
            Ok(g) => Some(g),
            Err(e) => {
                let spans: Vec<SourceSpan> = match &e {
                    crate::abstraction::ShapeError::Mismatch { first, second, .. } => vec![*first, *second],
                    _ => vec![self.def.span],
                };
                let msg = e.to_string();
                for span in spans {
                    self.fail(2, msg.clone(), span);
                }
                None
            }
        }
    }

    fn step3(&mut self, g: Option<&Generalization>) {
        let span = self.def.span;
        if let Some(g) = g {
            if g.holes.len() != self.f.params.len() {
                let msg = format!(
                    "the samples differ in {} place{} but {} has {} parameter{}",
                    g.holes.len(),
                    plural(g.holes.len()),
                    self.f.name,
                    self.f.params.len(),
                    plural(self.f.params.len())
                );
                self.fail(3, msg, span);
            }
        } else {
            self.fail(3, "parameters are named after the differences found in Step 2", span);
        }
        let short: Vec<String> = self.f.params.iter().filter(|p| p.chars().count() == 1).cloned().collect();
        for p in short {
            self.warn(3, format!("parameter `{p}` is not descriptive; avoid simplistic names such as k or x"), span);
        }
    }

    fn step4(&mut self, samples: &[Sample<'p>], g: Option<&Generalization>, mapping: Option<&[usize]>) {
        let span = self.def.comments.as_ref().map(|c| c.span).unwrap_or(self.def.span);
        let declared = self.def.comments.as_ref().and_then(|c| parse_signature_comment(c, &self.config.aliases));
        let Some(declared) = declared else {
            self.fail(4, format!("no signature comment (e.g. `; T1 T2 -> T`) above {}", self.f.name), span);
            return;
        };
        let (Some(g), Some(mapping)) = (g, mapping) else {
            self.warn(4, "the signature could not be compared with the sample values", span);
            return;
        };
        let inferred = match self.inferred_signature(samples, g, mapping) {
            Ok(sig) => sig,
            Err(msg) => {
                self.fail(4, msg, span);
                return;
            }
        };
        for problem in declared.admits(&inferred) {
            self.fail(4, problem.to_string(), span);
        }
    }

    /// Signature implied by the samples, in header parameter order.
    fn inferred_signature(&self, samples: &[Sample<'p>], g: &Generalization, mapping: &[usize]) -> Result<Signature, String> {
        let mut interp = Interpreter::load(self.program, self.config.seed)
            .map_err(|e| format!("evaluating the program failed: {e}"))?;
        let eval_all = |interp: &mut Interpreter, exprs: &mut dyn Iterator<Item = &Expr>| -> Result<Vec<Value>, String> {
            exprs.map(|e| interp.eval(e).map_err(|err| format!("evaluating a sample failed: {err}"))).collect()
        };
        let mut params = vec![None; self.f.params.len()];
        for (h, hole) in g.holes.iter().enumerate() {
            let values = eval_all(&mut interp, &mut hole.values.iter())?;
            params[mapping[h]] = Some(infer_type_with_limit(&values, self.config.enum_limit));
        }
        let returns = eval_all(&mut interp, &mut samples.iter().map(|s| s.body))?;
        Ok(Signature::new(
            params.into_iter().map(|t| t.expect("mapping is a bijection")).collect(),
            infer_type_with_limit(&returns, self.config.enum_limit),
        ))
    }

    fn step5(&mut self) {
        let has_purpose = self
            .def
            .comments
            .as_ref()
            .is_some_and(|c| c.contents().any(|l| l.trim_start().to_ascii_lowercase().starts_with("purpose:")));
        if !has_purpose {
            let span = self.def.comments.as_ref().map(|c| c.span).unwrap_or(self.def.span);
            self.fail(5, format!("no `; Purpose:` statement above {}", self.f.name), span);
        }
    }

    fn step6(&mut self, g: Option<&Generalization>) {
        let span = self.def.span;
        if let Some(g) = g {
            if g.holes.len() != self.f.params.len() {
                let msg = format!("the header takes {} parameters; Step 3 calls for {}", self.f.params.len(), g.holes.len());
                self.fail(6, msg, span);
            }
        }
        let used: HashSet<String> = self.f.body.free_vars().into_iter().collect();
        let unused: Vec<String> = self.f.params.iter().filter(|p| !used.contains(*p)).cloned().collect();
        for p in unused {
            self.fail(6, format!("parameter `{p}` is never used in the body"), span);
        }
    }

    fn step7(&mut self, samples: &[Sample<'p>], g: Option<&Generalization>, mapping: Option<&[usize]>) {
        let tests = self.tests_of_fn();
        if tests.is_empty() {
            let mut msg = format!("no test applies {}", self.f.name);
            let others: BTreeSet<&str> = self
                .program
                .tests()
                .filter_map(|(_, t)| t.applied_function())
                .filter(|op| self.program.function(op).is_none() && !crate::eval::is_builtin(op))
                .collect();
            if !others.is_empty() {
                let list = others.into_iter().collect::<Vec<_>>().join(", ");
                msg.push_str(&format!("; tests call undefined {list}"));
            }
            self.fail(7, msg, self.def.span);
            return;
        }
        if let (Some(g), Some(mapping)) = (g, mapping) {
            // Expected arguments per sample, in header order.
            let expected_args = |i: usize| -> Vec<Expr> {
                let mut args = vec![Expr::boolean(false); mapping.len()];
                for (h, &p) in mapping.iter().enumerate() {
                    args[p] = g.holes[h].values[i].clone();
                }
                args
            };
            for (i, s) in samples.iter().enumerate() {
                let want = expected_args(i);
                let mut matched = false;
                let mut mismatched = Vec::new();
                for (d, t) in &tests {
                    if !matches!(&t.expected.kind, ExprKind::Var(n) if *n == s.name) {
                        continue;
                    }
                    if test_args(t) == want.as_slice() {
                        matched = true;
                    } else {
                        mismatched.push(d.span);
                    }
                }
                let args = want.iter().map(print_expr).collect::<Vec<_>>().join(" ");
                let msg = format!(
                    "a test expecting {} should apply {} to that sample's values in header order: ({} {})",
                    s.name, self.f.name, self.f.name, args
                );
                if !matched {
                    self.fail(7, msg, mismatched.first().copied().unwrap_or(s.span));
                } else {
                    for span in mismatched {
                        self.warn(7, msg.clone(), span);
                    }
                }
            }

            let fresh = tests.iter().any(|(_, t)| {
                let args = test_args(t);
                args.len() == mapping.len()
                    && mapping.iter().enumerate().any(|(h, &p)| !g.holes[h].values.contains(&args[p]))
            });
            if !fresh {
                self.fail(7, "add at least one test using concrete values that differ from the samples", self.def.span);
            }
        }
        self.check_clause_tests(&tests);
    }

    /// For a `cond` body, at least one test per clause.
    fn check_clause_tests(&mut self, tests: &[(&'p Definition, &'p TestDef)]) {
        let ExprKind::Cond { clauses, else_answer } = &self.f.body.kind else { return };
        let Ok(mut interp) = Interpreter::load(self.program, self.config.seed) else { return };
        interp.take_coverage();
        for (i, (d, t)) in tests.iter().enumerate() {
            run_test(&mut interp, t, d.span, i);
        }
        let covered = interp.take_coverage();
        let answers = clauses.iter().map(|c| &c.answer).chain(else_answer.as_deref());
        let untested: Vec<(SourceSpan, String)> = answers
            .filter(|a| !covered.contains(&a.id))
            .map(|a| (a.span, self.program.text(a.span).to_string()))
            .collect();
        for (span, text) in untested {
            let what = if text.is_empty() { "a cond clause".to_string() } else { format!("the clause answering {text}") };
            self.fail(7, format!("no test of {} reaches {what}", self.f.name), span);
        }
    }

    fn step8(&mut self, g: &Generalization) -> Option<Vec<usize>> {
        match match_template(&g.template, &self.f.params, &self.f.body) {
            Ok(mapping) if mapping.len() == self.f.params.len() => Some(mapping),
            Ok(_) => {
                let msg = "the body does not use every parameter in place of a difference between the samples";
                self.fail(8, msg, self.f.body.span);
                None
            }
            Err(m) => {
                let names = &self.f.params;
                let expected = match &m.expected.kind {
                    ExprKind::Hole(_) => "a parameter".to_string(),
                    _ => print_expr(&m.expected.fill_holes(&|h| Expr::var(names.get(h).cloned().unwrap_or_default()))),
                };
                let span = if m.found.span.end > m.found.span.start { m.found.span } else { self.f.body.span };
                let msg = format!(
                    "the body should have the same structure as the samples: expected {expected} but found {}",
                    print_expr(&m.found)
                );
                self.fail(8, msg, span);
                None
            }
        }
    }

    fn step9(&mut self) {
        let (tests, coverage) = match run_program(self.program, self.config.seed) {
            Ok(r) => r,
            Err(e) => {
                self.fail(9, format!("running the program failed: {}", e.kind), e.span);
                return;
            }
        };
        for r in tests.failures() {
            let msg = match r.status {
                TestStatus::Error => format!("test raised an error: {}", r.actual),
                _ => format!("test failed: got {} but expected {}", r.actual, r.expected),
            };
            self.fail(9, msg, r.span);
        }
        let uncovered: Vec<_> = coverage.uncovered_in(&self.f.name).to_vec();
        for u in uncovered {
            self.fail(9, format!("this code is never run by a test: {}", u.text), u.span);
        }
    }
}

fn test_args(t: &TestDef) -> &[Expr] {
    match &t.actual.kind {
        ExprKind::App { args, .. } => args,
        _ => &[],
    }
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}
