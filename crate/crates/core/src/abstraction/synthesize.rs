use std::collections::BTreeSet;

use thiserror::Error;

use super::generalize::{default_atomic_forms, generalize, Generalization, ShapeError};
use crate::eval::{EvalError, Interpreter};
use crate::signature::{infer_signature, SemType, Signature};
use crate::syntax::{Definition, Expr, TestDef};

#[derive(Debug, Clone)]
pub struct SynthesisRequest {
    pub name: String,
    /// Parameter names in hole order; derived from the inferred types when
    /// absent.
    pub param_names: Option<Vec<String>>,
    pub purpose: Option<String>,
    pub atomic_forms: BTreeSet<String>,
}

impl SynthesisRequest {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), param_names: None, purpose: None, atomic_forms: default_atomic_forms() }
    }

    pub fn params<S: Into<String>>(mut self, names: impl IntoIterator<Item = S>) -> Self {
        self.param_names = Some(names.into_iter().map(Into::into).collect());
        self
    }

    pub fn purpose(mut self, purpose: impl Into<String>) -> Self {
        self.purpose = Some(purpose.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesizedFunction {
    pub name: String,
    pub params: Vec<(String, SemType)>,
    pub return_type: SemType,
    pub purpose: String,
    pub body: Expr,
    /// The named sample expressions the function was abstracted from.
    pub samples: Vec<(String, Expr)>,
    /// `(check-expect (name args…) SAMPLE)` for every sample.
    pub variable_tests: Vec<TestDef>,
    /// Tests with values not used by any sample; none are invented here.
    pub fresh_tests: Vec<TestDef>,
    pub generalization: Generalization,
    /// Naming advice, e.g. single-letter parameter names.
    pub warnings: Vec<String>,
}

impl SynthesizedFunction {
    pub fn signature(&self) -> Signature {
        Signature::new(self.params.iter().map(|(_, t)| t.clone()).collect(), self.return_type.clone())
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn definition(&self) -> Definition {
        Definition::function(self.name.clone(), self.param_names(), self.body.clone())
    }

    /// Adds a `(check-expect (name args…) expected)` test.
    pub fn add_fresh_test(&mut self, args: Vec<Expr>, expected: Expr) {
        self.fresh_tests.push(TestDef::expect(Expr::app(self.name.clone(), args), expected));
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SynthesisError {
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("the sample expressions have no differences; define a constant instead")]
    NoDifference,
    #[error("found {found} parameter names but the samples have {holes} differences")]
    ParamCount { holes: usize, found: usize },
    #[error("parameter name `{0}` is used twice")]
    DuplicateParam(String),
    #[error("evaluating a sample failed: {0}")]
    Eval(#[from] EvalError),
}

/// Abstracts a function from named sample expressions: generalize, name one
/// parameter per difference, type the parameters from the sample values, and
/// write one test per sample that uses its defining constant as the expected
/// value.
pub fn synthesize(
    samples: &[(String, Expr)],
    request: &SynthesisRequest,
    interp: &mut Interpreter,
) -> Result<SynthesizedFunction, SynthesisError> {
    let exprs: Vec<Expr> = samples.iter().map(|(_, e)| e.clone()).collect();
    let g = generalize(&exprs, &request.atomic_forms)?;
    if g.holes.is_empty() {
        return Err(SynthesisError::NoDifference);
    }
    let returns = exprs.iter().map(|e| interp.eval(e)).collect::<Result<Vec<_>, _>>()?;
    let sig = infer_signature(&g, &returns, interp)?;

    let names = match &request.param_names {
        Some(names) => {
            if names.len() != g.holes.len() {
                return Err(SynthesisError::ParamCount { holes: g.holes.len(), found: names.len() });
            }
            names.clone()
        }
        None => default_param_names(&sig.params),
    };
    for (i, n) in names.iter().enumerate() {
        if names[..i].contains(n) {
            return Err(SynthesisError::DuplicateParam(n.clone()));
        }
    }
    let warnings = names
        .iter()
        .filter(|n| n.chars().count() == 1)
        .map(|n| format!("parameter `{n}` is not descriptive; avoid simplistic names such as k or x"))
        .collect();

    let body = g.with_parameters(&names);
    let variable_tests = samples
        .iter()
        .enumerate()
        .map(|(i, (constant, _))| {
            let mut args = g.arguments(i);
            args.iter_mut().for_each(Expr::strip_locations);
            TestDef::expect(Expr::app(request.name.clone(), args), Expr::var(constant.clone()))
        })
        .collect();
    let purpose = request
        .purpose
        .clone()
        .unwrap_or_else(|| format!("To compute {} from the given {}", request.name, names.join(" and ")));
    let mut stripped = samples.to_vec();
    stripped.iter_mut().for_each(|(_, e)| e.strip_locations());

    Ok(SynthesizedFunction {
        name: request.name.clone(),
        params: names.into_iter().zip(sig.params).collect(),
        return_type: sig.ret,
        purpose,
        body,
        samples: stripped,
        variable_tests,
        fresh_tests: Vec::new(),
        generalization: g,
        warnings,
    })
}

/// `n1, n2, …` for numbers; `a-posn`, `a-string`, … otherwise, numbered when
/// the same kind occurs more than once.
pub fn default_param_names(types: &[SemType]) -> Vec<String> {
    let base = |t: &SemType| -> (String, bool) {
        match t {
            SemType::NonNegReal | SemType::Real => ("n".into(), true),
            SemType::Posn => ("a-posn".into(), false),
            SemType::StringEnum(_) | SemType::StringAny => ("a-string".into(), false),
            SemType::Boolean => ("a-boolean".into(), false),
            SemType::Image => ("an-image".into(), false),
            SemType::Alias(name) => (format!("a-{name}"), false),
            SemType::Any | SemType::Never => ("a-value".into(), false),
        }
    };
    let bases: Vec<(String, bool)> = types.iter().map(base).collect();
    let mut seen = std::collections::HashMap::<&str, usize>::new();
    bases
        .iter()
        .map(|(b, always_number)| {
            let total = bases.iter().filter(|(o, _)| o == b).count();
            let k = seen.entry(b).or_insert(0);
            *k += 1;
            if *always_number || total > 1 {
                format!("{b}{k}")
            } else {
                b.clone()
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_expr, parse_program};

    fn samples(pairs: &[(&str, &str)]) -> Vec<(String, Expr)> {
        pairs.iter().map(|(n, e)| (n.to_string(), parse_expr(e).unwrap())).collect()
    }

    #[test]
    fn rect_area() {
        let s = samples(&[("AREA1", "(* 10 5)"), ("AREA2", "(* 50 2)"), ("AREA3", "(* 4 25)")]);
        let mut interp = Interpreter::new(0);
        let sf = synthesize(&s, &SynthesisRequest::new("rect-area").params(["length", "width"]), &mut interp).unwrap();
        assert_eq!(sf.body, parse_expr("(* length width)").unwrap());
        assert_eq!(sf.signature(), Signature::new(vec![SemType::NonNegReal; 2], SemType::NonNegReal));
        let program = parse_program(
            "(check-expect (rect-area 10 5) AREA1)\n(check-expect (rect-area 50 2) AREA2)\n(check-expect (rect-area 4 25) AREA3)",
        )
        .unwrap();
        let expected: Vec<TestDef> = program.tests().map(|(_, t)| t.clone()).collect();
        assert_eq!(sf.variable_tests, expected);
        assert!(sf.warnings.is_empty());
    }

    #[test]
    fn default_names() {
        let s = samples(&[("A", "(* 10 5)"), ("B", "(* 50 2)")]);
        let sf = synthesize(&s, &SynthesisRequest::new("area"), &mut Interpreter::new(0)).unwrap();
        assert_eq!(sf.param_names(), vec!["n1", "n2"]);
        assert_eq!(
            default_param_names(&[SemType::Posn, SemType::Posn, SemType::enumeration(["up"])]),
            vec!["a-posn1", "a-posn2", "a-string"]
        );
    }

    #[test]
    fn errors() {
        let same = samples(&[("A", "(* 10 5)"), ("B", "(* 10 5)")]);
        assert_eq!(
            synthesize(&same, &SynthesisRequest::new("f"), &mut Interpreter::new(0)).unwrap_err(),
            SynthesisError::NoDifference
        );
        let one = samples(&[("A", "(+ 1 2)")]);
        assert!(matches!(
            synthesize(&one, &SynthesisRequest::new("f"), &mut Interpreter::new(0)).unwrap_err(),
            SynthesisError::Shape(ShapeError::TooFewSamples(1))
        ));
        let s = samples(&[("A", "(* 10 5)"), ("B", "(* 50 2)")]);
        assert!(matches!(
            synthesize(&s, &SynthesisRequest::new("f").params(["only"]), &mut Interpreter::new(0)).unwrap_err(),
            SynthesisError::ParamCount { holes: 2, found: 1 }
        ));
        assert!(matches!(
            synthesize(&s, &SynthesisRequest::new("f").params(["a", "a"]), &mut Interpreter::new(0)).unwrap_err(),
            SynthesisError::DuplicateParam(_)
        ));
    }

    #[test]
    fn short_names_warn() {
        let s = samples(&[("A", "(* 10 5)"), ("B", "(* 50 2)")]);
        let sf = synthesize(&s, &SynthesisRequest::new("f").params(["k", "width"]), &mut Interpreter::new(0)).unwrap();
        assert_eq!(sf.warnings.len(), 1);
    }
}
