use std::fmt;

use serde::Serialize;

use crate::number::{self, Rational};

/// Byte range plus the 1-based line/column of its first character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub column: u32,
}

impl SourceSpan {
    pub fn new(start: usize, end: usize, line: u32, column: u32) -> Self {
        debug_assert!(start <= end && line >= 1 && column >= 1);
        Self { start, end, line, column }
    }

    /// Placeholder span for nodes built in memory rather than read from text.
    pub const fn synthetic() -> Self {
        Self { start: 0, end: 0, line: 1, column: 1 }
    }

    pub fn to(self, other: SourceSpan) -> SourceSpan {
        SourceSpan { end: other.end, ..self }
    }

    pub fn slice<'a>(&self, source: &'a str) -> &'a str {
        source.get(self.start..self.end).unwrap_or("")
    }
}

impl Default for SourceSpan {
    fn default() -> Self {
        Self::synthetic()
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

/// Identifier of an expression node, unique within one parsed program.
/// Nodes built in memory carry id 0.
pub type NodeId = u32;

/// An expression node. Equality is structural: `id` and `span` are ignored.
#[derive(Debug, Clone)]
pub struct Expr {
    pub id: NodeId,
    pub span: SourceSpan,
    pub kind: ExprKind,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    Num(Rational),
    Str(String),
    Bool(bool),
    Var(String),
    App { op: String, args: Vec<Expr> },
    Cond { clauses: Vec<CondClause>, else_answer: Option<Box<Expr>> },
    And(Vec<Expr>),
    Or(Vec<Expr>),
    /// Template position produced by generalization; never read from source.
    Hole(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CondClause {
    pub question: Expr,
    pub answer: Expr,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

/// Child index path from a root expression. For `cond`, clause `i` has its
/// question at `2i` and answer at `2i + 1`; the else answer comes last.
pub type Path = Vec<usize>;

impl Expr {
    pub fn new(kind: ExprKind) -> Self {
        Self { id: 0, span: SourceSpan::synthetic(), kind }
    }

    pub fn num(n: i64) -> Self {
        Self::new(ExprKind::Num(number::int(n)))
    }

    pub fn rational(r: Rational) -> Self {
        Self::new(ExprKind::Num(r))
    }

    pub fn string(s: impl Into<String>) -> Self {
        Self::new(ExprKind::Str(s.into()))
    }

    pub fn boolean(b: bool) -> Self {
        Self::new(ExprKind::Bool(b))
    }

    pub fn var(name: impl Into<String>) -> Self {
        Self::new(ExprKind::Var(name.into()))
    }

    pub fn app(op: impl Into<String>, args: Vec<Expr>) -> Self {
        Self::new(ExprKind::App { op: op.into(), args })
    }

    pub fn cond(clauses: Vec<(Expr, Expr)>, else_answer: Option<Expr>) -> Self {
        Self::new(ExprKind::Cond {
            clauses: clauses
                .into_iter()
                .map(|(question, answer)| CondClause { question, answer })
                .collect(),
            else_answer: else_answer.map(Box::new),
        })
    }

    pub fn hole(id: usize) -> Self {
        Self::new(ExprKind::Hole(id))
    }

    pub fn is_literal(&self) -> bool {
        matches!(self.kind, ExprKind::Num(_) | ExprKind::Str(_) | ExprKind::Bool(_))
    }

    /// True for `cond`, `and` and `or`.
    pub fn is_special_form(&self) -> bool {
        matches!(self.kind, ExprKind::Cond { .. } | ExprKind::And(_) | ExprKind::Or(_))
    }

    /// True when the node computes something (application or special form).
    pub fn is_compound(&self) -> bool {
        matches!(self.kind, ExprKind::App { .. }) || self.is_special_form()
    }

    /// Direct children in path order.
    pub fn children(&self) -> Vec<&Expr> {
        match &self.kind {
            ExprKind::App { args, .. } => args.iter().collect(),
            ExprKind::And(args) | ExprKind::Or(args) => args.iter().collect(),
            ExprKind::Cond { clauses, else_answer } => {
                let mut out = Vec::with_capacity(clauses.len() * 2 + 1);
                for c in clauses {
                    out.push(&c.question);
                    out.push(&c.answer);
                }
                if let Some(e) = else_answer {
                    out.push(e);
                }
                out
            }
            _ => Vec::new(),
        }
    }

    pub fn children_mut(&mut self) -> Vec<&mut Expr> {
        match &mut self.kind {
            ExprKind::App { args, .. } => args.iter_mut().collect(),
            ExprKind::And(args) | ExprKind::Or(args) => args.iter_mut().collect(),
            ExprKind::Cond { clauses, else_answer } => {
                let mut out = Vec::with_capacity(clauses.len() * 2 + 1);
                for c in clauses.iter_mut() {
                    out.push(&mut c.question);
                    out.push(&mut c.answer);
                }
                if let Some(e) = else_answer {
                    out.push(&mut **e);
                }
                out
            }
            _ => Vec::new(),
        }
    }

    pub fn at_path(&self, path: &[usize]) -> Option<&Expr> {
        let mut node = self;
        for &i in path {
            node = node.children().into_iter().nth(i)?;
        }
        Some(node)
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Expr)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Replaces every hole `i` by `fill(i)`.
    pub fn fill_holes(&self, fill: &impl Fn(usize) -> Expr) -> Expr {
        let mut out = self.clone();
        fill_in_place(&mut out, fill);
        out
    }

    /// Renames variable references according to `rename`; unmapped names stay.
    pub fn rename_vars(&self, rename: &impl Fn(&str) -> Option<String>) -> Expr {
        let mut out = self.clone();
        rename_in_place(&mut out, rename);
        out
    }

    /// Drops spans and ids so the node compares and hashes like a fresh tree.
    pub fn strip_locations(&mut self) {
        self.id = 0;
        self.span = SourceSpan::synthetic();
        for c in self.children_mut() {
            c.strip_locations();
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let ExprKind::Var(v) = &e.kind {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        });
        out
    }
}

fn fill_in_place(e: &mut Expr, fill: &impl Fn(usize) -> Expr) {
    if let ExprKind::Hole(h) = e.kind {
        *e = fill(h);
        return;
    }
    for c in e.children_mut() {
        fill_in_place(c, fill);
    }
}

fn rename_in_place(e: &mut Expr, rename: &impl Fn(&str) -> Option<String>) {
    if let ExprKind::Var(v) = &e.kind {
        if let Some(new) = rename(v) {
            e.kind = ExprKind::Var(new);
        }
        return;
    }
    for c in e.children_mut() {
        rename_in_place(c, rename);
    }
}

/// A run of `;` comment lines. Equality compares the text only.
#[derive(Debug, Clone)]
pub struct CommentBlock {
    pub lines: Vec<String>,
    pub span: SourceSpan,
}

impl PartialEq for CommentBlock {
    fn eq(&self, other: &Self) -> bool {
        self.lines == other.lines
    }
}

impl CommentBlock {
    pub fn new(lines: Vec<String>) -> Self {
        Self { lines, span: SourceSpan::synthetic() }
    }

    /// Comment text with the leading semicolons and one space removed.
    pub fn contents(&self) -> impl Iterator<Item = &str> {
        self.lines.iter().map(|l| strip_comment_marker(l))
    }
}

pub fn strip_comment_marker(line: &str) -> &str {
    line.trim_start().trim_start_matches(';').trim()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TestKind {
    Expect,
    Within,
    Random,
}

impl TestKind {
    pub fn keyword(self) -> &'static str {
        match self {
            TestKind::Expect => "check-expect",
            TestKind::Within => "check-within",
            TestKind::Random => "check-random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestDef {
    pub kind: TestKind,
    pub actual: Expr,
    pub expected: Expr,
    /// Present exactly when `kind` is `Within`.
    pub tolerance: Option<Expr>,
}

impl TestDef {
    pub fn expect(actual: Expr, expected: Expr) -> Self {
        Self { kind: TestKind::Expect, actual, expected, tolerance: None }
    }

    pub fn within(actual: Expr, expected: Expr, tolerance: Expr) -> Self {
        Self { kind: TestKind::Within, actual, expected, tolerance: Some(tolerance) }
    }

    pub fn random(actual: Expr, expected: Expr) -> Self {
        Self { kind: TestKind::Random, actual, expected, tolerance: None }
    }

    /// Name of the function the test's actual operand applies, if any.
    pub fn applied_function(&self) -> Option<&str> {
        match &self.actual.kind {
            ExprKind::App { op, .. } => Some(op),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DefKind {
    Constant { name: String, body: Expr },
    Function { name: String, params: Vec<String>, body: Expr },
    Test(TestDef),
}

#[derive(Debug, Clone)]
pub struct Definition {
    pub kind: DefKind,
    /// The comment block directly above the definition, if any.
    pub comments: Option<CommentBlock>,
    /// A `;` comment on the same line as the definition's closing paren.
    pub trailing_comment: Option<String>,
    pub span: SourceSpan,
}

impl PartialEq for Definition {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
            && self.comments == other.comments
            && self.trailing_comment == other.trailing_comment
    }
}

impl Definition {
    pub fn new(kind: DefKind) -> Self {
        Self { kind, comments: None, trailing_comment: None, span: SourceSpan::synthetic() }
    }

    pub fn with_comments<S: Into<String>>(mut self, lines: impl IntoIterator<Item = S>) -> Self {
        let lines: Vec<String> = lines.into_iter().map(Into::into).collect();
        self.comments = if lines.is_empty() { None } else { Some(CommentBlock::new(lines)) };
        self
    }

    pub fn constant(name: impl Into<String>, body: Expr) -> Self {
        Self::new(DefKind::Constant { name: name.into(), body })
    }

    pub fn function(name: impl Into<String>, params: Vec<String>, body: Expr) -> Self {
        Self::new(DefKind::Function { name: name.into(), params, body })
    }

    pub fn test(test: TestDef) -> Self {
        Self::new(DefKind::Test(test))
    }

    /// Defined name for constants and functions.
    pub fn name(&self) -> Option<&str> {
        match &self.kind {
            DefKind::Constant { name, .. } | DefKind::Function { name, .. } => Some(name),
            DefKind::Test(_) => None,
        }
    }

    pub fn as_test(&self) -> Option<&TestDef> {
        match &self.kind {
            DefKind::Test(t) => Some(t),
            _ => None,
        }
    }
}

/// Comment block not attached to any definition; printed before definition
/// number `before`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatingComment {
    pub before: usize,
    pub block: CommentBlock,
}

#[derive(Debug, Clone, Default)]
pub struct Program {
    pub definitions: Vec<Definition>,
    pub floating_comments: Vec<FloatingComment>,
    pub source: String,
}

impl PartialEq for Program {
    fn eq(&self, other: &Self) -> bool {
        self.definitions == other.definitions && self.floating_comments == other.floating_comments
    }
}

/// Definition of a function as seen by the evaluator and the checkers.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expr,
}

impl Program {
    /// Compares definitions only, ignoring every comment.
    pub fn same_code(&self, other: &Program) -> bool {
        self.definitions.len() == other.definitions.len()
            && self.definitions.iter().zip(&other.definitions).all(|(a, b)| a.kind == b.kind)
    }

    pub fn tests(&self) -> impl Iterator<Item = (&Definition, &TestDef)> {
        self.definitions.iter().filter_map(|d| d.as_test().map(|t| (d, t)))
    }

    pub fn definition(&self, name: &str) -> Option<&Definition> {
        self.definitions.iter().find(|d| d.name() == Some(name))
    }

    pub fn function(&self, name: &str) -> Option<FunctionDef> {
        self.definitions.iter().find_map(|d| match &d.kind {
            DefKind::Function { name: n, params, body } if n == name => Some(FunctionDef {
                name: n.clone(),
                params: params.clone(),
                body: body.clone(),
            }),
            _ => None,
        })
    }

    pub fn constant(&self, name: &str) -> Option<&Expr> {
        self.definitions.iter().find_map(|d| match &d.kind {
            DefKind::Constant { name: n, body } if n == name => Some(body),
            _ => None,
        })
    }

    /// Source text covered by `span`, or the empty string for programs built
    /// in memory.
    pub fn text(&self, span: SourceSpan) -> &str {
        span.slice(&self.source)
    }
}
