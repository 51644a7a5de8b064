//! Semantic types for signature comments: a small lattice ordered by
//! "describes fewer values", inference from example values, and the
//! `; T1 … Tn → T` comment syntax.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::Signed;

use crate::abstraction::Generalization;
use crate::eval::{EvalError, Interpreter, Value};
use crate::syntax::CommentBlock;

/// String enumerations wider than this many literals widen to `String`.
pub const DEFAULT_ENUM_LIMIT: usize = 8;

/// Names a signature may use for user-level data definitions ("rocket").
pub type AliasMap = BTreeMap<String, SemType>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SemType {
    Never,
    Boolean,
    StringEnum(BTreeSet<String>),
    StringAny,
    NonNegReal,
    Real,
    Posn,
    Image,
    Alias(String),
    Any,
}

/// Coarse classification used for alias consistency.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeKind {
    Never,
    Boolean,
    String,
    Number,
    Posn,
    Image,
    Alias,
    Any,
}

impl SemType {
    pub fn enumeration<S: Into<String>>(items: impl IntoIterator<Item = S>) -> SemType {
        SemType::StringEnum(items.into_iter().map(Into::into).collect())
    }

    /// Most specific type of a single value.
    pub fn of_value(v: &Value) -> SemType {
        match v {
            Value::Num(n) if n.is_negative() => SemType::Real,
            Value::Num(_) => SemType::NonNegReal,
            Value::Str(s) => SemType::enumeration([s.clone()]),
            Value::Bool(_) => SemType::Boolean,
            Value::Posn(_) => SemType::Posn,
            Value::Image(_) => SemType::Image,
        }
    }

    pub fn kind(&self) -> TypeKind {
        match self {
            SemType::Never => TypeKind::Never,
            SemType::Boolean => TypeKind::Boolean,
            SemType::StringEnum(_) | SemType::StringAny => TypeKind::String,
            SemType::NonNegReal | SemType::Real => TypeKind::Number,
            SemType::Posn => TypeKind::Posn,
            SemType::Image => TypeKind::Image,
            SemType::Alias(_) => TypeKind::Alias,
            SemType::Any => TypeKind::Any,
        }
    }

    /// Subtype order.
    pub fn leq(&self, other: &SemType) -> bool {
        use SemType::*;
        match (self, other) {
            (Never, _) | (_, Any) => true,
            (StringEnum(a), StringEnum(b)) => a.is_subset(b),
            (StringEnum(_), StringAny) => true,
            (NonNegReal, Real) => true,
            (a, b) => a == b,
        }
    }

    pub fn join(&self, other: &SemType) -> SemType {
        self.join_with_limit(other, DEFAULT_ENUM_LIMIT)
    }

    /// Least upper bound; enumerations above `limit` literals widen to
    /// `StringAny`.
    pub fn join_with_limit(&self, other: &SemType, limit: usize) -> SemType {
        use SemType::*;
        match (self, other) {
            (StringEnum(a), StringEnum(b)) => {
                let u: BTreeSet<String> = a.union(b).cloned().collect();
                if u.len() > limit {
                    StringAny
                } else {
                    StringEnum(u)
                }
            }
            (a, b) if a.leq(b) => b.clone(),
            (a, b) if b.leq(a) => a.clone(),
            _ => Any,
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Never => f.write_str("Never"),
            SemType::Boolean => f.write_str("Boolean"),
            SemType::StringAny => f.write_str("String"),
            SemType::StringEnum(items) => {
                f.write_str("{")?;
                for (i, s) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{s:?}")?;
                }
                f.write_str("}")
            }
            SemType::NonNegReal => f.write_str("ℝ≥0"),
            SemType::Real => f.write_str("ℝ"),
            SemType::Posn => f.write_str("Posn"),
            SemType::Image => f.write_str("Image"),
            SemType::Alias(name) => f.write_str(name),
            SemType::Any => f.write_str("Any"),
        }
    }
}

pub fn infer_type(values: &[Value]) -> SemType {
    infer_type_with_limit(values, DEFAULT_ENUM_LIMIT)
}

/// Join of the per-value types; the empty list gives `Never`.
pub fn infer_type_with_limit(values: &[Value], limit: usize) -> SemType {
    values.iter().map(SemType::of_value).fold(SemType::Never, |acc, t| acc.join_with_limit(&t, limit))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    pub params: Vec<SemType>,
    pub ret: SemType,
}

impl Signature {
    pub fn new(params: Vec<SemType>, ret: SemType) -> Self {
        Self { params, ret }
    }

    /// Comment line form, e.g. `; ℝ≥0 ℝ≥0 → ℝ≥0`.
    pub fn comment_line(&self) -> String {
        format!("; {self}")
    }

    /// Replaces positions with user-facing alias names where given, e.g.
    /// `(Posn, Posn) → Boolean` as `rocket fuel → Boolean`.
    pub fn with_aliases(&self, params: &[Option<&str>], ret: Option<&str>) -> Signature {
        let pick = |t: &SemType, a: Option<&str>| a.map(|n| SemType::Alias(n.to_string())).unwrap_or_else(|| t.clone());
        Signature {
            params: self.params.iter().enumerate().map(|(i, t)| pick(t, params.get(i).copied().flatten())).collect(),
            ret: pick(&self.ret, ret),
        }
    }

    /// Checks a declared signature against an inferred one. Concrete
    /// positions need `inferred ⊑ declared`. An alias is bound to the first
    /// inferred type it meets and must keep the same kind everywhere else.
    pub fn admits(&self, inferred: &Signature) -> Vec<SignatureMismatch> {
        let mut out = Vec::new();
        if self.params.len() != inferred.params.len() {
            out.push(SignatureMismatch::Arity { declared: self.params.len(), expected: inferred.params.len() });
            return out;
        }
        let mut bound: BTreeMap<&str, SemType> = BTreeMap::new();
        let positions = self.params.iter().zip(&inferred.params).map(Some).chain([Some((&self.ret, &inferred.ret))]);
        for (i, pair) in positions.enumerate() {
            let (declared, actual) = pair.unwrap();
            let position = if i < self.params.len() { Position::Param(i) } else { Position::Return };
            let ok = match declared {
                SemType::Alias(name) => match bound.get(name.as_str()) {
                    Some(prev) => {
                        let (k1, k2) = (prev.kind(), actual.kind());
                        k1 == k2 || matches!(k1, TypeKind::Any | TypeKind::Never) || matches!(k2, TypeKind::Any | TypeKind::Never)
                    }
                    None => {
                        bound.insert(name, actual.clone());
                        true
                    }
                },
                d => actual.leq(d),
            };
            if !ok {
                out.push(SignatureMismatch::Position {
                    position,
                    declared: declared.clone(),
                    inferred: actual.clone(),
                });
            }
        }
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.params {
            write!(f, "{p} ")?;
        }
        write!(f, "→ {}", self.ret)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    Param(usize),
    Return,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignatureMismatch {
    Arity { declared: usize, expected: usize },
    Position { position: Position, declared: SemType, inferred: SemType },
}

impl fmt::Display for SignatureMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureMismatch::Arity { declared, expected } => {
                write!(f, "signature lists {declared} parameter types but the function needs {expected}")
            }
            SignatureMismatch::Position { position, declared, inferred } => {
                let at = match position {
                    Position::Param(i) => format!("parameter {}", i + 1),
                    Position::Return => "the return type".to_string(),
                };
                write!(f, "{at} is declared {declared} but the sample values are {inferred}")
            }
        }
    }
}

const ARROWS: &[&str] = &["--->", "-->", "->", "→"];

/// Finds the first line of `block` shaped like `T1 … Tn -> T`.
pub fn parse_signature_comment(block: &CommentBlock, aliases: &AliasMap) -> Option<Signature> {
    block.contents().find_map(|line| parse_signature_line(line, aliases))
}

/// Parses one comment line (without the `;`).
pub fn parse_signature_line(line: &str, aliases: &AliasMap) -> Option<Signature> {
    let tokens = tokenize(line)?;
    let arrow = tokens.iter().position(|t| ARROWS.contains(&t.as_str()))?;
    if arrow + 2 != tokens.len() {
        return None;
    }
    let params = tokens[..arrow].iter().map(|t| parse_type(t, aliases)).collect::<Option<Vec<_>>>()?;
    let ret = parse_type(&tokens[arrow + 1], aliases)?;
    Some(Signature { params, ret })
}

fn tokenize(line: &str) -> Option<Vec<String>> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '{' {
            let mut tok = String::new();
            let mut in_str = false;
            loop {
                let c = chars.next()?;
                tok.push(c);
                match c {
                    '\\' if in_str => tok.push(chars.next()?),
                    '"' => in_str = !in_str,
                    '}' if !in_str => break,
                    _ => {}
                }
            }
            out.push(tok);
        } else {
            let mut tok = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '{' {
                    break;
                }
                tok.push(c);
                chars.next();
            }
            out.push(tok);
        }
    }
    Some(out)
}

fn parse_type(tok: &str, aliases: &AliasMap) -> Option<SemType> {
    if let Some(inner) = tok.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
        return parse_enum(inner).map(SemType::StringEnum);
    }
    if tok.is_empty() || !tok.chars().all(|c| c.is_alphanumeric() || "-_?!≥*+/<>=".contains(c)) {
        return None;
    }
    let builtin = match tok.to_ascii_lowercase().as_str() {
        "ℝ≥0" | "nonnegreal" | "nonnegativereal" | "nonnegativenumber" => Some(SemType::NonNegReal),
        "ℝ" | "real" | "number" => Some(SemType::Real),
        "boolean" | "bool" => Some(SemType::Boolean),
        "string" => Some(SemType::StringAny),
        "posn" => Some(SemType::Posn),
        "image" => Some(SemType::Image),
        "any" => Some(SemType::Any),
        "never" => Some(SemType::Never),
        _ => None,
    };
    Some(builtin.or_else(|| aliases.get(tok).cloned()).unwrap_or_else(|| SemType::Alias(tok.to_string())))
}

fn parse_enum(inner: &str) -> Option<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    let mut chars = inner.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        match chars.next() {
            None => return Some(out),
            Some('"') => {
                let mut s = String::new();
                loop {
                    match chars.next()? {
                        '"' => break,
                        '\\' => s.push(chars.next()?),
                        c => s.push(c),
                    }
                }
                out.insert(s);
            }
            Some(_) => return None,
        }
    }
}

/// Parameter types from each hole's evaluated sample values, return type
/// from the samples' own values.
pub fn infer_signature(
    g: &Generalization,
    return_values: &[Value],
    interp: &mut Interpreter,
) -> Result<Signature, EvalError> {
    let mut params = Vec::with_capacity(g.holes.len());
    for hole in &g.holes {
        let values = hole.values.iter().map(|e| interp.eval(e)).collect::<Result<Vec<_>, _>>()?;
        params.push(infer_type(&values));
    }
    Ok(Signature { params, ret: infer_type(return_values) })
}
