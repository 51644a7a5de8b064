use std::collections::HashSet;

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;
use crate::number;

const KEYWORDS: &[&str] =
    &["define", "cond", "else", "and", "or", "check-expect", "check-within", "check-random"];

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, SourceSpan),
    Str(String, SourceSpan),
    List(Vec<Sexp>, SourceSpan),
}

impl Sexp {
    fn span(&self) -> SourceSpan {
        match self {
            Sexp::Atom(_, s) | Sexp::Str(_, s) | Sexp::List(_, s) => *s,
        }
    }

    fn atom(&self) -> Option<&str> {
        match self {
            Sexp::Atom(a, _) => Some(a),
            _ => None,
        }
    }

    fn describe(&self) -> &'static str {
        match self {
            Sexp::Atom(a, _) if number::parse_literal(a).is_some() => "a number",
            Sexp::Atom(_, _) => "a name",
            Sexp::Str(_, _) => "a string",
            Sexp::List(_, _) => "a part",
        }
    }
}

enum TopItem {
    Form(Sexp),
    Comment { text: String, own_line: bool, span: SourceSpan },
}

struct Reader {
    tokens: Vec<Token>,
    pos: usize,
}

impl Reader {
    fn top_level(mut self) -> Result<Vec<TopItem>, ParseError> {
        let mut items = Vec::new();
        while self.pos < self.tokens.len() {
            let tok = &self.tokens[self.pos];
            if let TokenKind::Comment { text, own_line } = &tok.kind {
                items.push(TopItem::Comment { text: text.clone(), own_line: *own_line, span: tok.span });
                self.pos += 1;
            } else {
                items.push(TopItem::Form(self.datum()?));
            }
        }
        Ok(items)
    }

    fn datum(&mut self) -> Result<Sexp, ParseError> {
        let tok = self.tokens[self.pos].clone();
        self.pos += 1;
        match tok.kind {
            TokenKind::Atom(a) => Ok(Sexp::Atom(a, tok.span)),
            TokenKind::Str(s) => Ok(Sexp::Str(s, tok.span)),
            TokenKind::Close(c) => Err(ParseError::new(format!("unexpected `{c}`"), tok.span)),
            TokenKind::Comment { .. } => unreachable!("comments are skipped before datum"),
            TokenKind::Open(open) => {
                let close = match open {
                    '(' => ')',
                    '[' => ']',
                    _ => '}',
                };
                let mut items = Vec::new();
                loop {
                    let Some(next) = self.tokens.get(self.pos) else {
                        return Err(ParseError::new(
                            format!("found `{open}` without a matching `{close}`"),
                            tok.span,
                        ));
                    };
                    match &next.kind {
                        TokenKind::Comment { .. } => self.pos += 1,
                        TokenKind::Close(c) if *c == close => {
                            let end = next.span.end;
                            self.pos += 1;
                            let span = SourceSpan { end, ..tok.span };
                            return Ok(Sexp::List(items, span));
                        }
                        TokenKind::Close(c) => {
                            return Err(ParseError::new(
                                format!("expected `{close}` to close `{open}`, found `{c}`"),
                                next.span,
                            ))
                        }
                        _ => items.push(self.datum()?),
                    }
                }
            }
        }
    }
}

/// Parses a whole program, attaching comment blocks to the definitions that
/// immediately follow them.
pub fn parse_program(source: &str) -> Result<Program, ParseError> {
    let tokens = tokenize(source)?;
    let items = Reader { tokens, pos: 0 }.top_level()?;
    let mut conv = Converter { next_id: 1 };

    let mut definitions: Vec<Definition> = Vec::new();
    let mut floating = Vec::new();
    let mut pending: Vec<(String, SourceSpan)> = Vec::new();
    let mut last_form_end_line = 0u32;

    let flush = |pending: &mut Vec<(String, SourceSpan)>, floating: &mut Vec<FloatingComment>, before: usize| {
        if !pending.is_empty() {
            floating.push(FloatingComment { before, block: block_of(std::mem::take(pending)) });
        }
    };

    for item in items {
        match item {
            TopItem::Comment { text, own_line, span } => {
                if !own_line && span.line == last_form_end_line {
                    if let Some(def) = definitions.last_mut() {
                        if def.trailing_comment.is_none() {
                            def.trailing_comment = Some(text);
                            continue;
                        }
                    }
                }
                if let Some((_, last)) = pending.last() {
                    if last.line + 1 != span.line {
                        flush(&mut pending, &mut floating, definitions.len());
                    }
                }
                pending.push((text, span));
            }
            TopItem::Form(sexp) => {
                let span = sexp.span();
                let attached = match pending.last() {
                    Some((_, last)) if last.line + 1 == span.line => Some(block_of(std::mem::take(&mut pending))),
                    _ => {
                        flush(&mut pending, &mut floating, definitions.len());
                        None
                    }
                };
                let mut def = conv.definition(&sexp)?;
                def.comments = attached;
                def.span = span;
                last_form_end_line = line_of(source, span.end.saturating_sub(1), span);
                definitions.push(def);
            }
        }
    }
    flush(&mut pending, &mut floating, definitions.len());

    let mut seen = HashSet::new();
    for def in &definitions {
        if let Some(name) = def.name() {
            if !seen.insert(name.to_string()) {
                return Err(ParseError::new(format!("{name}: this name was defined previously"), def.span));
            }
        }
    }

    Ok(Program { definitions, floating_comments: floating, source: source.to_string() })
}

/// Parses a single expression (no definitions).
pub fn parse_expr(source: &str) -> Result<Expr, ParseError> {
    let tokens: Vec<Token> =
        tokenize(source)?.into_iter().filter(|t| !matches!(t.kind, TokenKind::Comment { .. })).collect();
    if tokens.is_empty() {
        return Err(ParseError::new("expected an expression", SourceSpan::synthetic()));
    }
    let mut reader = Reader { tokens, pos: 0 };
    let sexp = reader.datum()?;
    if let Some(extra) = reader.tokens.get(reader.pos) {
        return Err(ParseError::new("unexpected text after the expression", extra.span));
    }
    Converter { next_id: 1 }.expr(&sexp)
}

fn line_of(source: &str, byte: usize, span: SourceSpan) -> u32 {
    let from = span.start.min(source.len());
    let to = byte.min(source.len()).max(from);
    span.line + source[from..to].matches('\n').count() as u32
}

fn block_of(lines: Vec<(String, SourceSpan)>) -> CommentBlock {
    let span = lines.first().unwrap().1.to(lines.last().unwrap().1);
    CommentBlock { lines: lines.into_iter().map(|(t, _)| t).collect(), span }
}

struct Converter {
    next_id: NodeId,
}

impl Converter {
    fn node(&mut self, span: SourceSpan, kind: ExprKind) -> Expr {
        let id = self.next_id;
        self.next_id += 1;
        Expr { id, span, kind }
    }

    fn name(&self, s: &Sexp, what: &str) -> Result<String, ParseError> {
        match s {
            Sexp::Atom(a, span) => {
                if number::parse_literal(a).is_some() || a.starts_with('#') || KEYWORDS.contains(&a.as_str()) {
                    Err(ParseError::new(format!("expected {what}, found `{a}`"), *span))
                } else {
                    Ok(a.clone())
                }
            }
            other => Err(ParseError::new(format!("expected {what}, found {}", other.describe()), other.span())),
        }
    }

    fn definition(&mut self, s: &Sexp) -> Result<Definition, ParseError> {
        let Sexp::List(items, span) = s else {
            return Err(ParseError::new(
                format!("expected a definition or test at the top level, found {}", s.describe()),
                s.span(),
            ));
        };
        let head = items.first().and_then(Sexp::atom).unwrap_or("");
        let arity_err =
            |n: usize| ParseError::new(format!("{head}: expected {n} parts, found {}", items.len() - 1), *span);
        let kind = match head {
            "define" => {
                if items.len() != 3 {
                    return Err(ParseError::new(
                        format!("define: expected a name and an expression, found {} parts", items.len() - 1),
                        *span,
                    ));
                }
                match &items[1] {
                    Sexp::List(header, hspan) => {
                        let Some(fname) = header.first() else {
                            return Err(ParseError::new("define: expected a function name", *hspan));
                        };
                        let name = self.name(fname, "a function name")?;
                        if header.len() < 2 {
                            return Err(ParseError::new(
                                format!("define: expected at least one parameter for {name}"),
                                *hspan,
                            ));
                        }
                        let mut params: Vec<String> = Vec::new();
                        for p in &header[1..] {
                            let pname = self.name(p, "a parameter name")?;
                            if params.contains(&pname) {
                                return Err(ParseError::new(
                                    format!("define: duplicate parameter name `{pname}`"),
                                    p.span(),
                                ));
                            }
                            params.push(pname);
                        }
                        let body = self.expr(&items[2])?;
                        DefKind::Function { name, params, body }
                    }
                    other => {
                        let name = self.name(other, "a variable name")?;
                        let body = self.expr(&items[2])?;
                        DefKind::Constant { name, body }
                    }
                }
            }
            "check-expect" | "check-random" => {
                if items.len() != 3 {
                    return Err(arity_err(2));
                }
                let actual = self.expr(&items[1])?;
                let expected = self.expr(&items[2])?;
                DefKind::Test(if head == "check-expect" {
                    TestDef::expect(actual, expected)
                } else {
                    TestDef::random(actual, expected)
                })
            }
            "check-within" => {
                if items.len() != 4 {
                    return Err(arity_err(3));
                }
                let actual = self.expr(&items[1])?;
                let expected = self.expr(&items[2])?;
                let tol = self.expr(&items[3])?;
                DefKind::Test(TestDef::within(actual, expected, tol))
            }
            _ => {
                return Err(ParseError::new(
                    "expected a definition or test at the top level (define, check-expect, check-within, check-random)",
                    *span,
                ))
            }
        };
        Ok(Definition::new(kind))
    }

    fn expr(&mut self, s: &Sexp) -> Result<Expr, ParseError> {
        match s {
            Sexp::Str(text, span) => Ok(self.node(*span, ExprKind::Str(text.clone()))),
            Sexp::Atom(a, span) => {
                if let Some(n) = number::parse_literal(a) {
                    let n = n.map_err(|m| ParseError::new(m, *span))?;
                    return Ok(self.node(*span, ExprKind::Num(n)));
                }
                match a.as_str() {
                    "#true" | "#t" | "true" => Ok(self.node(*span, ExprKind::Bool(true))),
                    "#false" | "#f" | "false" => Ok(self.node(*span, ExprKind::Bool(false))),
                    _ if a.starts_with('#') => Err(ParseError::new(format!("bad literal `{a}`"), *span)),
                    "else" => Err(ParseError::new("else: not allowed here, because this is not a cond clause", *span)),
                    _ if KEYWORDS.contains(&a.as_str()) => Err(ParseError::new(
                        format!("{a}: expected an open parenthesis before {a}"),
                        *span,
                    )),
                    _ => Ok(self.node(*span, ExprKind::Var(a.clone()))),
                }
            }
            Sexp::List(items, span) => {
                let Some(head) = items.first() else {
                    return Err(ParseError::new("expected a function after the open parenthesis, found nothing", *span));
                };
                let Some(op) = head.atom().filter(|a| number::parse_literal(a).is_none() && !a.starts_with('#'))
                else {
                    return Err(ParseError::new(
                        format!("expected a function after the open parenthesis, found {}", head.describe()),
                        head.span(),
                    ));
                };
                let id = self.next_id;
                self.next_id += 1;
                let kind = match op {
                    "cond" => self.cond(&items[1..], *span)?,
                    "and" | "or" => {
                        if items.len() < 3 {
                            return Err(ParseError::new(
                                format!("{op}: expects at least 2 arguments, found {}", items.len() - 1),
                                *span,
                            ));
                        }
                        let args = items[1..].iter().map(|a| self.expr(a)).collect::<Result<Vec<_>, _>>()?;
                        if op == "and" {
                            ExprKind::And(args)
                        } else {
                            ExprKind::Or(args)
                        }
                    }
                    "define" | "check-expect" | "check-within" | "check-random" => {
                        return Err(ParseError::new(format!("{op}: found a definition that is not at the top level"), *span))
                    }
                    "else" => {
                        return Err(ParseError::new("else: not allowed here, because this is not a cond clause", *span))
                    }
                    _ => {
                        if items.len() < 2 {
                            return Err(ParseError::new(
                                format!("{op}: expected at least one argument after the function name"),
                                *span,
                            ));
                        }
                        let args = items[1..].iter().map(|a| self.expr(a)).collect::<Result<Vec<_>, _>>()?;
                        ExprKind::App { op: op.to_string(), args }
                    }
                };
                Ok(Expr { id, span: *span, kind })
            }
        }
    }

    fn cond(&mut self, clauses: &[Sexp], span: SourceSpan) -> Result<ExprKind, ParseError> {
        let mut out = Vec::new();
        let mut else_answer = None;
        for (i, clause) in clauses.iter().enumerate() {
            let Sexp::List(parts, cspan) = clause else {
                return Err(ParseError::new(
                    format!("cond: expected a clause with a question and an answer, found {}", clause.describe()),
                    clause.span(),
                ));
            };
            if parts.len() != 2 {
                return Err(ParseError::new(
                    format!("cond: expected a clause with a question and an answer, found {} parts", parts.len()),
                    *cspan,
                ));
            }
            if parts[0].atom() == Some("else") {
                if i + 1 != clauses.len() {
                    return Err(ParseError::new("cond: found an else clause that isn't the last clause", *cspan));
                }
                else_answer = Some(Box::new(self.expr(&parts[1])?));
            } else {
                let question = self.expr(&parts[0])?;
                let answer = self.expr(&parts[1])?;
                out.push(CondClause { question, answer });
            }
        }
        if out.is_empty() {
            return Err(ParseError::new("cond requires at least one clause", span));
        }
        Ok(ExprKind::Cond { clauses: out, else_answer })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn area_constant() {
        let p = parse_program("(define AREA1 (* 10 5))").unwrap();
        assert_eq!(p.definitions.len(), 1);
        assert_eq!(
            p.definitions[0].kind,
            DefKind::Constant { name: "AREA1".into(), body: Expr::app("*", vec![Expr::num(10), Expr::num(5)]) }
        );
    }

    #[test]
    fn empty_source() {
        let p = parse_program("").unwrap();
        assert!(p.definitions.is_empty());
    }

    #[test]
    fn empty_cond_is_rejected() {
        let err = parse_program("(define (f x) (cond))").unwrap_err();
        assert_eq!(err.message, "cond requires at least one clause");
    }

    #[test]
    fn duplicate_params() {
        let err = parse_program("(define (f x x) x)").unwrap_err();
        assert!(err.message.contains("duplicate parameter"), "{err}");
    }

    #[test]
    fn unbalanced() {
        assert!(parse_program("(define A (* 1 2)").is_err());
        assert!(parse_program("(define A 1))").is_err());
        assert!(parse_program("(define A [+ 1 2)]").is_err());
    }

    #[test]
    fn boolean_spellings() {
        let p = parse_program("(define A (and #t #true))\n(define B (or #f #false))").unwrap();
        let a = p.constant("A").unwrap();
        assert_eq!(*a, Expr::new(ExprKind::And(vec![Expr::boolean(true), Expr::boolean(true)])));
        let b = p.constant("B").unwrap();
        assert_eq!(*b, Expr::new(ExprKind::Or(vec![Expr::boolean(false), Expr::boolean(false)])));
    }

    #[test]
    fn bad_literals() {
        assert!(parse_program("(define A #q)").is_err());
        assert!(parse_program("(define A 1/0)").is_err());
        assert!(parse_program("(define A 3x)").is_err());
    }

    #[test]
    fn else_must_be_last() {
        assert!(parse_program("(define (f x) (cond [else 1] [(= x 1) 2]))").is_err());
        let p = parse_program("(define (f x) (cond [(= x 1) 2] [else 1]))").unwrap();
        let f = p.function("f").unwrap();
        assert!(matches!(f.body.kind, ExprKind::Cond { ref else_answer, .. } if else_answer.is_some()));
    }

    #[test]
    fn check_within_needs_tolerance() {
        assert!(parse_program("(check-within 1 1)").is_err());
        let p = parse_program("(check-within (sqr 2) 4 0.01)").unwrap();
        assert!(p.tests().next().unwrap().1.tolerance.is_some());
        assert!(parse_program("(check-expect 1 1 1)").is_err());
    }

    #[test]
    fn duplicate_definitions() {
        assert!(parse_program("(define A 1)\n(define A 2)").is_err());
    }

    #[test]
    fn comment_attachment() {
        let src = "; heading\n(define A 1) ; trailing\n\n; floating\n\n; sig\n; Purpose: p\n(define (f x) x)\n";
        let p = parse_program(src).unwrap();
        assert_eq!(p.definitions[0].comments.as_ref().unwrap().lines, vec!["; heading"]);
        assert_eq!(p.definitions[0].trailing_comment.as_deref(), Some("; trailing"));
        assert_eq!(p.floating_comments.len(), 1);
        assert_eq!(p.floating_comments[0].before, 1);
        assert_eq!(p.floating_comments[0].block.lines, vec!["; floating"]);
        assert_eq!(p.definitions[1].comments.as_ref().unwrap().lines, vec!["; sig", "; Purpose: p"]);
    }

    #[test]
    fn blank_line_detaches() {
        let p = parse_program("; lonely\n\n(define A 1)").unwrap();
        assert!(p.definitions[0].comments.is_none());
        assert_eq!(p.floating_comments.len(), 1);
    }

    #[test]
    fn node_ids_unique() {
        let p = parse_program("(define (f x) (cond [(< x 0) (- x)] [else x]))\n(check-expect (f 1) 1)").unwrap();
        let mut ids = Vec::new();
        for d in &p.definitions {
            let exprs: Vec<&Expr> = match &d.kind {
                DefKind::Function { body, .. } | DefKind::Constant { body, .. } => vec![body],
                DefKind::Test(t) => vec![&t.actual, &t.expected],
            };
            for e in exprs {
                e.walk(&mut |n| ids.push(n.id));
            }
        }
        let set: HashSet<_> = ids.iter().collect();
        assert_eq!(set.len(), ids.len());
        assert!(!ids.contains(&0));
    }

    #[test]
    fn spans_slice_their_nodes() {
        let src = "(define (move a-dir)\n  (cond [(string=? a-dir \"up\") 1]\n        [else 2]))";
        let p = parse_program(src).unwrap();
        let f = p.function("move").unwrap();
        f.body.walk(&mut |n| {
            let text = n.span.slice(src);
            assert_eq!(parse_expr(text).unwrap(), *n, "span text {text:?}");
        });
    }
}
