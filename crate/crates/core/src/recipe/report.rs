use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::syntax::SourceSpan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warn,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Warn,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Warn => "warn",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
    pub span: SourceSpan,
}

impl Diagnostic {
    pub fn new(severity: Severity, message: impl Into<String>, span: SourceSpan) -> Self {
        Self { severity, message: message.into(), span }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepVerdict {
    pub step: usize,
    pub status: Status,
    pub diagnostics: Vec<Diagnostic>,
}

impl StepVerdict {
    pub fn new(step: usize) -> Self {
        Self { step, status: Status::Pass, diagnostics: Vec::new() }
    }

    pub fn push(&mut self, d: Diagnostic) {
        self.status = match (self.status, d.severity) {
            (_, Severity::Fail) | (Status::Fail, _) => Status::Fail,
            _ => Status::Warn,
        };
        self.diagnostics.push(d);
    }

    pub fn title(&self) -> &'static str {
        STEP_TITLES[self.step - 1]
    }
}

pub const STEP_TITLES: [&str; 9] = [
    "sample expressions",
    "differences",
    "parameter names",
    "signature",
    "purpose statement",
    "function header",
    "tests",
    "function body",
    "run the tests",
];

#[derive(Debug, Clone, PartialEq)]
pub struct RecipeReport {
    pub function: String,
    pub steps: Vec<StepVerdict>,
    pub overall: Status,
}

impl RecipeReport {
    pub fn new(function: &str, steps: Vec<StepVerdict>) -> Self {
        let overall = if steps.iter().any(|s| s.status == Status::Fail) { Status::Fail } else { Status::Pass };
        Self { function: function.to_string(), steps, overall }
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }

    pub fn step(&self, n: usize) -> &StepVerdict {
        &self.steps[n - 1]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let steps: Vec<_> = self
            .steps
            .iter()
            .map(|s| {
                let diagnostics: Vec<_> = s
                    .diagnostics
                    .iter()
                    .map(|d| {
                        json!({
                            "message": d.message,
                            "line": d.span.line,
                            "col": d.span.column,
                            "severity": d.severity,
                        })
                    })
                    .collect();
                json!({ "step": s.step, "status": s.status, "diagnostics": diagnostics })
            })
            .collect();
        json!({ "function": self.function, "steps": steps, "overall": self.overall })
    }

    pub fn render(&self) -> String {
        let mut out = format!("design recipe for {}\n", self.function);
        for s in &self.steps {
            let _ = writeln!(out, "  step {} {:<20} {}", s.step, s.title(), s.status.as_str());
            for d in &s.diagnostics {
                let _ = writeln!(out, "    {}:{}: {}", d.span.line, d.span.column, d.message);
            }
        }
        let _ = writeln!(out, "overall: {}", self.overall.as_str());
        out
    }
}
