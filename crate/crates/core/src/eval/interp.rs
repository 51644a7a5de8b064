use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::rng::RngState;
use super::value::{ImageExpr, Mode, Posn, Value};
use crate::number::Rational;
use crate::syntax::{DefKind, Expr, ExprKind, FunctionDef, NodeId, Program, SourceSpan};

/// Local bindings (function parameters).
pub type Env = HashMap<String, Value>;

const MAX_CALL_DEPTH: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalErrorKind {
    #[error("{0}: this variable is not defined")]
    Unbound(String),
    #[error("{0}: this function is not defined")]
    UnknownFunction(String),
    #[error("{0}: expected a function call, but there is no open parenthesis before this function")]
    FunctionAsValue(String),
    #[error("{0}: is not a function")]
    NotAFunction(String),
    #[error("{name}: expects {expected}, given {given}")]
    Arity { name: String, expected: String, given: usize },
    #[error("{op}: expects {expected}, given {given}")]
    Type { op: String, expected: String, given: String },
    #[error("cond: all question results were false")]
    CondFallthrough,
    #[error("/: division by zero")]
    DivisionByZero,
    #[error("{op}: {message}")]
    Domain { op: String, message: String },
    #[error("found an unfilled template hole")]
    Hole,
    #[error("maximum recursion depth exceeded")]
    RecursionLimit,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{span}: {kind}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub span: SourceSpan,
}

impl EvalError {
    fn new(kind: EvalErrorKind, span: SourceSpan) -> Self {
        Self { kind, span }
    }
}

type EvalResult<T> = Result<T, EvalError>;

/// Global definitions plus the mutable state of one evaluation run: the RNG
/// stream and the set of expression nodes entered so far.
#[derive(Debug, Clone)]
pub struct Interpreter {
    functions: HashMap<String, Arc<FunctionDef>>,
    constants: HashMap<String, Value>,
    pub rng: RngState,
    coverage: BTreeSet<NodeId>,
    depth: usize,
}

impl Interpreter {
    pub fn new(seed: u64) -> Self {
        Self {
            functions: HashMap::new(),
            constants: HashMap::new(),
            rng: RngState::seeded(seed),
            coverage: BTreeSet::new(),
            depth: 0,
        }
    }

    /// Registers the program's functions and evaluates its constants in
    /// source order. A constant sees only what was defined above it.
    pub fn load(program: &Program, seed: u64) -> EvalResult<Self> {
        let mut interp = Self::new(seed);
        for def in &program.definitions {
            match &def.kind {
                DefKind::Function { name, params, body } => interp.define_function(FunctionDef {
                    name: name.clone(),
                    params: params.clone(),
                    body: body.clone(),
                }),
                DefKind::Constant { name, body } => interp.define_constant(name, body)?,
                DefKind::Test(_) => {}
            }
        }
        Ok(interp)
    }

    pub fn define_function(&mut self, f: FunctionDef) {
        self.functions.insert(f.name.clone(), Arc::new(f));
    }

    pub fn define_constant(&mut self, name: &str, body: &Expr) -> EvalResult<()> {
        let v = self.eval(body)?;
        self.constants.insert(name.to_string(), v);
        Ok(())
    }

    pub fn constant(&self, name: &str) -> Option<&Value> {
        self.constants.get(name)
    }

    pub fn has_function(&self, name: &str) -> bool {
        self.functions.contains_key(name)
    }

    pub fn coverage(&self) -> &BTreeSet<NodeId> {
        &self.coverage
    }

    pub fn take_coverage(&mut self) -> BTreeSet<NodeId> {
        std::mem::take(&mut self.coverage)
    }

    /// Evaluates in global scope.
    pub fn eval(&mut self, expr: &Expr) -> EvalResult<Value> {
        self.eval_in(expr, &Env::new())
    }

    pub fn eval_in(&mut self, expr: &Expr, env: &Env) -> EvalResult<Value> {
        stacker::maybe_grow(64 * 1024, 2 * 1024 * 1024, || self.eval_node(expr, env))
    }

    fn eval_node(&mut self, expr: &Expr, env: &Env) -> EvalResult<Value> {
        if expr.id != 0 {
            self.coverage.insert(expr.id);
        }
        match &expr.kind {
            ExprKind::Num(n) => Ok(Value::Num(n.clone())),
            ExprKind::Str(s) => Ok(Value::Str(s.clone())),
            ExprKind::Bool(b) => Ok(Value::Bool(*b)),
            ExprKind::Hole(_) => Err(EvalError::new(EvalErrorKind::Hole, expr.span)),
            ExprKind::Var(name) => {
                if let Some(v) = env.get(name).or_else(|| self.constants.get(name)) {
                    Ok(v.clone())
                } else if self.functions.contains_key(name) || is_builtin(name) {
                    Err(EvalError::new(EvalErrorKind::FunctionAsValue(name.clone()), expr.span))
                } else {
                    Err(EvalError::new(EvalErrorKind::Unbound(name.clone()), expr.span))
                }
            }
            ExprKind::And(args) | ExprKind::Or(args) => {
                let is_and = matches!(expr.kind, ExprKind::And(_));
                let op = if is_and { "and" } else { "or" };
                for a in args {
                    match self.eval_in(a, env)? {
                        Value::Bool(b) if b != is_and => return Ok(Value::Bool(b)),
                        Value::Bool(_) => {}
                        other => return Err(type_error(op, "a boolean", &other, a.span)),
                    }
                }
                Ok(Value::Bool(is_and))
            }
            ExprKind::Cond { clauses, else_answer } => {
                for c in clauses {
                    match self.eval_in(&c.question, env)? {
                        Value::Bool(true) => return self.eval_in(&c.answer, env),
                        Value::Bool(false) => {}
                        other => {
                            return Err(type_error("cond", "a boolean question result", &other, c.question.span))
                        }
                    }
                }
                match else_answer {
                    Some(e) => self.eval_in(e, env),
                    None => Err(EvalError::new(EvalErrorKind::CondFallthrough, expr.span)),
                }
            }
            ExprKind::App { op, args } => {
                if env.contains_key(op) || self.constants.contains_key(op) {
                    return Err(EvalError::new(EvalErrorKind::NotAFunction(op.clone()), expr.span));
                }
                let mut vals = Vec::with_capacity(args.len());
                for a in args {
                    vals.push(self.eval_in(a, env)?);
                }
                if let Some(f) = self.functions.get(op) {
                    if f.params.len() != vals.len() {
                        return Err(EvalError::new(
                            EvalErrorKind::Arity {
                                name: op.clone(),
                                expected: plural(f.params.len(), "argument"),
                                given: vals.len(),
                            },
                            expr.span,
                        ));
                    }
                    if self.depth >= MAX_CALL_DEPTH {
                        return Err(EvalError::new(EvalErrorKind::RecursionLimit, expr.span));
                    }
                    let f = Arc::clone(f);
                    let local: Env = f.params.iter().cloned().zip(vals).collect();
                    self.depth += 1;
                    let result = self.eval_in(&f.body, &local);
                    self.depth -= 1;
                    result
                } else {
                    self.builtin(op, vals, expr.span)
                }
            }
        }
    }

    fn builtin(&mut self, op: &str, args: Vec<Value>, span: SourceSpan) -> EvalResult<Value> {
        let arity = |min: usize, max: Option<usize>| -> EvalResult<()> {
            let ok = args.len() >= min && max.map_or(true, |m| args.len() <= m);
            if ok {
                return Ok(());
            }
            let expected = match max {
                Some(m) if m == min => plural(min, "argument"),
                Some(m) => format!("between {min} and {m} arguments"),
                None => format!("at least {}", plural(min, "argument")),
            };
            Err(EvalError::new(EvalErrorKind::Arity { name: op.to_string(), expected, given: args.len() }, span))
        };
        let num = |v: &Value| -> EvalResult<Rational> {
            match v {
                Value::Num(n) => Ok(n.clone()),
                other => Err(type_error(op, "a number", other, span)),
            }
        };
        let nums = |args: &[Value]| -> EvalResult<Vec<Rational>> { args.iter().map(num).collect() };
        let string = |v: &Value| -> EvalResult<String> {
            match v {
                Value::Str(s) => Ok(s.clone()),
                other => Err(type_error(op, "a string", other, span)),
            }
        };
        let image = |v: &Value| -> EvalResult<ImageExpr> {
            match v {
                Value::Image(i) => Ok((**i).clone()),
                other => Err(type_error(op, "an image", other, span)),
            }
        };
        let nonneg = |v: &Value| -> EvalResult<Rational> {
            let n = num(v)?;
            if n.is_negative() {
                return Err(type_error(op, "a non-negative number", v, span));
            }
            Ok(n)
        };
        let mode = |v: &Value| -> EvalResult<Mode> {
            let s = string(v)?;
            Mode::parse(&s).ok_or_else(|| type_error(op, "\"solid\" or \"outline\"", v, span))
        };

        let value = match op {
            "+" => {
                arity(2, None)?;
                Value::Num(nums(&args)?.into_iter().fold(Rational::zero(), |a, b| a + b))
            }
            "*" => {
                arity(2, None)?;
                Value::Num(nums(&args)?.into_iter().fold(Rational::one(), |a, b| a * b))
            }
            "-" => {
                arity(1, None)?;
                let ns = nums(&args)?;
                if ns.len() == 1 {
                    Value::Num(-ns[0].clone())
                } else {
                    let mut it = ns.into_iter();
                    let first = it.next().unwrap();
                    Value::Num(it.fold(first, |a, b| a - b))
                }
            }
            "/" => {
                arity(2, None)?;
                let ns = nums(&args)?;
                let mut it = ns.into_iter();
                let mut acc = it.next().unwrap();
                for d in it {
                    if d.is_zero() {
                        return Err(EvalError::new(EvalErrorKind::DivisionByZero, span));
                    }
                    acc /= d;
                }
                Value::Num(acc)
            }
            "abs" => {
                arity(1, Some(1))?;
                Value::Num(num(&args[0])?.abs())
            }
            "sqr" => {
                arity(1, Some(1))?;
                let n = num(&args[0])?;
                Value::Num(&n * &n)
            }
            "min" | "max" => {
                arity(1, None)?;
                let ns = nums(&args)?;
                let pick = if op == "min" { ns.into_iter().min() } else { ns.into_iter().max() };
                Value::Num(pick.unwrap())
            }
            "expt" => {
                arity(2, Some(2))?;
                let base = num(&args[0])?;
                let exp = num(&args[1])?;
                if !exp.is_integer() {
                    return Err(type_error(op, "an integer exponent", &args[1], span));
                }
                let e = exp.to_integer().to_i32().filter(|e| e.abs() <= 4096).ok_or_else(|| {
                    EvalError::new(
                        EvalErrorKind::Domain { op: op.into(), message: "exponent too large".into() },
                        span,
                    )
                })?;
                if base.is_zero() && e < 0 {
                    return Err(EvalError::new(EvalErrorKind::DivisionByZero, span));
                }
                Value::Num(num_traits::pow::Pow::pow(base, e))
            }
            "<" | "<=" | ">" | ">=" | "=" => {
                arity(2, None)?;
                let ns = nums(&args)?;
                let holds = ns.windows(2).all(|w| match op {
                    "<" => w[0] < w[1],
                    "<=" => w[0] <= w[1],
                    ">" => w[0] > w[1],
                    ">=" => w[0] >= w[1],
                    _ => w[0] == w[1],
                });
                Value::Bool(holds)
            }
            "string=?" => {
                arity(2, None)?;
                let ss = args.iter().map(string).collect::<EvalResult<Vec<_>>>()?;
                Value::Bool(ss.windows(2).all(|w| w[0] == w[1]))
            }
            "not" => {
                arity(1, Some(1))?;
                match &args[0] {
                    Value::Bool(b) => Value::Bool(!b),
                    other => return Err(type_error(op, "a boolean", other, span)),
                }
            }
            "make-posn" => {
                arity(2, Some(2))?;
                Value::Posn(Posn::new(num(&args[0])?, num(&args[1])?))
            }
            "posn-x" | "posn-y" => {
                arity(1, Some(1))?;
                match &args[0] {
                    Value::Posn(p) => Value::Num(if op == "posn-x" { p.x.clone() } else { p.y.clone() }),
                    other => return Err(type_error(op, "a posn", other, span)),
                }
            }
            "random" => {
                arity(1, Some(1))?;
                let n = num(&args[0])?;
                if !n.is_integer() || !n.is_positive() {
                    return Err(type_error(op, "a positive integer", &args[0], span));
                }
                let bound: BigInt = n.to_integer();
                Value::Num(Rational::from_integer(self.rng.below(&bound)))
            }
            "rectangle" => {
                arity(4, Some(4))?;
                Value::Image(Box::new(ImageExpr::Rect {
                    width: nonneg(&args[0])?,
                    height: nonneg(&args[1])?,
                    mode: mode(&args[2])?,
                    color: string(&args[3])?,
                }))
            }
            "circle" => {
                arity(3, Some(3))?;
                Value::Image(Box::new(ImageExpr::Circ {
                    radius: nonneg(&args[0])?,
                    mode: mode(&args[1])?,
                    color: string(&args[2])?,
                }))
            }
            "empty-scene" => {
                arity(2, Some(2))?;
                Value::Image(Box::new(ImageExpr::EmptyScene { width: nonneg(&args[0])?, height: nonneg(&args[1])? }))
            }
            "rotate" => {
                arity(2, Some(2))?;
                Value::Image(Box::new(ImageExpr::Rotate { degrees: num(&args[0])?, image: Box::new(image(&args[1])?) }))
            }
            "place-image" => {
                arity(4, Some(4))?;
                Value::Image(Box::new(ImageExpr::Place {
                    image: Box::new(image(&args[0])?),
                    x: num(&args[1])?,
                    y: num(&args[2])?,
                    base: Box::new(image(&args[3])?),
                }))
            }
            "image-width" | "image-height" => {
                arity(1, Some(1))?;
                let img = image(&args[0])?;
                Value::Num(if op == "image-width" { img.width() } else { img.height() })
            }
            _ => return Err(EvalError::new(EvalErrorKind::UnknownFunction(op.to_string()), span)),
        };
        Ok(value)
    }
}

pub const BUILTINS: &[&str] = &[
    "+", "-", "*", "/", "abs", "min", "max", "expt", "sqr", "<", "<=", ">", ">=", "=", "string=?", "not",
    "make-posn", "posn-x", "posn-y", "random", "rectangle", "circle", "empty-scene", "rotate", "place-image",
    "image-width", "image-height",
];

pub fn is_builtin(name: &str) -> bool {
    BUILTINS.contains(&name)
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("1 {word}")
    } else {
        format!("{n} {word}s")
    }
}

fn type_error(op: &str, expected: &str, given: &Value, span: SourceSpan) -> EvalError {
    EvalError::new(
        EvalErrorKind::Type { op: op.to_string(), expected: expected.to_string(), given: given.to_string() },
        span,
    )
}

/// Evaluates `expr` against builtins and the given bindings only, threading
/// the RNG state through.
pub fn evaluate(expr: &Expr, env: &Env, rng: RngState) -> EvalResult<(Value, RngState)> {
    let mut interp = Interpreter::new(0);
    interp.rng = rng;
    let v = interp.eval_in(expr, env)?;
    Ok((v, interp.rng))
}
