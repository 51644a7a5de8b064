use std::fmt::Write as _;

use super::ast::*;
use crate::number;

const WIDTH: usize = 80;

/// Renders a program as source text. Comments are re-emitted where the
/// parser will attach them again.
pub fn print_program(p: &Program) -> String {
    let mut out = String::new();
    let mut floating = p.floating_comments.iter().peekable();
    for (i, def) in p.definitions.iter().enumerate() {
        let mut wrote_floating = false;
        while let Some(fc) = floating.next_if(|fc| fc.before <= i) {
            separate(&mut out);
            for line in &fc.block.lines {
                out.push_str(line);
                out.push('\n');
            }
            wrote_floating = true;
        }
        if let Some(block) = &def.comments {
            if !wrote_floating {
                separate(&mut out);
            } else {
                out.push('\n');
            }
            for line in &block.lines {
                out.push_str(line);
                out.push('\n');
            }
        } else if wrote_floating {
            out.push('\n');
        }
        out.push_str(&print_definition(def));
        if let Some(t) = &def.trailing_comment {
            out.push_str("  ");
            out.push_str(t);
        }
        out.push('\n');
    }
    let rest: Vec<_> = floating.collect();
    for fc in rest {
        separate(&mut out);
        for line in &fc.block.lines {
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}

/// Blank line between groups, but never at the top of the file.
fn separate(out: &mut String) {
    if !out.is_empty() && !out.ends_with("\n\n") {
        out.push('\n');
    }
}

pub fn print_definition(def: &Definition) -> String {
    match &def.kind {
        DefKind::Constant { name, body } => {
            let flat = format!("(define {name} {})", flat(body));
            if flat.chars().count() <= WIDTH {
                flat
            } else {
                format!("(define {name}\n  {})", pretty(body, 2))
            }
        }
        DefKind::Function { name, params, body } => {
            format!("(define ({name} {})\n  {})", params.join(" "), pretty(body, 2))
        }
        DefKind::Test(t) => {
            let mut parts = vec![&t.actual, &t.expected];
            if let Some(tol) = &t.tolerance {
                parts.push(tol);
            }
            let kw = t.kind.keyword();
            let flat = format!("({kw} {})", parts.iter().map(|e| flat(e)).collect::<Vec<_>>().join(" "));
            if flat.chars().count() <= WIDTH {
                return flat;
            }
            let indent = kw.len() + 2;
            let mut s = format!("({kw} ");
            for (i, e) in parts.iter().enumerate() {
                if i > 0 {
                    s.push('\n');
                    s.push_str(&" ".repeat(indent));
                }
                s.push_str(&pretty(e, indent));
            }
            s.push(')');
            s
        }
    }
}

pub fn print_expr(e: &Expr) -> String {
    flat(e)
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn flat(e: &Expr) -> String {
    let mut s = String::new();
    write_flat(e, &mut s);
    s
}

fn write_flat(e: &Expr, s: &mut String) {
    match &e.kind {
        ExprKind::Num(n) => s.push_str(&number::format_literal(n)),
        ExprKind::Str(t) => s.push_str(&quote(t)),
        ExprKind::Bool(b) => s.push_str(if *b { "#true" } else { "#false" }),
        ExprKind::Var(v) => s.push_str(v),
        ExprKind::Hole(h) => {
            let _ = write!(s, "⟨h{}⟩", h + 1);
        }
        ExprKind::App { op, args } => {
            s.push('(');
            s.push_str(op);
            for a in args {
                s.push(' ');
                write_flat(a, s);
            }
            s.push(')');
        }
        ExprKind::And(args) | ExprKind::Or(args) => {
            s.push_str(if matches!(e.kind, ExprKind::And(_)) { "(and" } else { "(or" });
            for a in args {
                s.push(' ');
                write_flat(a, s);
            }
            s.push(')');
        }
        ExprKind::Cond { clauses, else_answer } => {
            s.push_str("(cond");
            for c in clauses {
                s.push_str(" [");
                write_flat(&c.question, s);
                s.push(' ');
                write_flat(&c.answer, s);
                s.push(']');
            }
            if let Some(e) = else_answer {
                s.push_str(" [else ");
                write_flat(e, s);
                s.push(']');
            }
            s.push(')');
        }
    }
}

/// Multi-line rendering starting at column `col`; falls back to the flat form
/// whenever it fits.
fn pretty(e: &Expr, col: usize) -> String {
    let f = flat(e);
    if col + f.chars().count() <= WIDTH {
        return f;
    }
    match &e.kind {
        ExprKind::App { op, args } => spread(&format!("({op} "), args.iter(), col),
        ExprKind::And(args) => spread("(and ", args.iter(), col),
        ExprKind::Or(args) => spread("(or ", args.iter(), col),
        ExprKind::Cond { clauses, else_answer } => {
            let inner = col + 6;
            let mut s = String::from("(cond ");
            let mut first = true;
            let mut clause = |q: String, a: &Expr, s: &mut String| {
                if !first {
                    s.push('\n');
                    s.push_str(&" ".repeat(inner));
                }
                first = false;
                let one = format!("[{q} {}]", flat(a));
                if inner + one.chars().count() <= WIDTH {
                    s.push_str(&one);
                } else {
                    let _ = write!(s, "[{q}\n{}{}]", " ".repeat(inner + 1), pretty(a, inner + 1));
                }
            };
            for c in clauses {
                clause(pretty(&c.question, inner + 1), &c.answer, &mut s);
            }
            if let Some(e) = else_answer {
                clause("else".to_string(), e, &mut s);
            }
            s.push(')');
            s
        }
        _ => f,
    }
}

fn spread<'a>(head: &str, args: impl Iterator<Item = &'a Expr>, col: usize) -> String {
    let inner = col + head.chars().count();
    let mut s = head.to_string();
    for (i, a) in args.enumerate() {
        if i > 0 {
            s.push('\n');
            s.push_str(&" ".repeat(inner));
        }
        s.push_str(&pretty(a, inner));
    }
    s.push(')');
    s
}
