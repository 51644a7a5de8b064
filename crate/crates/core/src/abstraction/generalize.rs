use std::collections::BTreeSet;

use thiserror::Error;

use crate::syntax::{Expr, ExprKind, Path, SourceSpan};

/// Applications of these operators are treated as single values: if two
/// samples differ anywhere inside one, the whole application becomes a hole.
pub const DEFAULT_ATOMIC_FORMS: &[&str] = &["make-posn"];

pub fn default_atomic_forms() -> BTreeSet<String> {
    DEFAULT_ATOMIC_FORMS.iter().map(|s| s.to_string()).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hole {
    /// One subexpression per sample, in sample order.
    pub values: Vec<Expr>,
    /// Every template position this hole occupies, in pre-order.
    pub positions: Vec<Path>,
}

/// Least general generalization of a family of sample expressions. Hole `i`
/// appears in the template as `ExprKind::Hole(i)`; holes are numbered in
/// left-to-right pre-order of first occurrence.
#[derive(Debug, Clone, PartialEq)]
pub struct Generalization {
    pub template: Expr,
    pub holes: Vec<Hole>,
}

impl Generalization {
    pub fn sample_count(&self) -> usize {
        self.holes.first().map(|h| h.values.len()).unwrap_or(0)
    }

    /// Hole values of one sample, in hole order.
    pub fn arguments(&self, sample: usize) -> Vec<Expr> {
        self.holes.iter().map(|h| h.values[sample].clone()).collect()
    }

    /// Substitutes sample `i`'s subexpressions back into the template.
    pub fn instantiate(&self, sample: usize) -> Expr {
        self.template.fill_holes(&|h| self.holes[h].values[sample].clone())
    }

    /// Template with each hole replaced by a variable.
    pub fn with_parameters(&self, names: &[String]) -> Expr {
        self.template.fill_holes(&|h| Expr::var(names[h].clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShapeError {
    #[error("at least two sample expressions are needed, found {0}")]
    TooFewSamples(usize),
    #[error("{first}: sample {first_sample} is {first_form} but sample {second_sample} at {second} is {second_form}; write the samples in the same manner")]
    Mismatch {
        path: Path,
        first_sample: usize,
        second_sample: usize,
        first_form: String,
        second_form: String,
        first: SourceSpan,
        second: SourceSpan,
    },
}

/// Anti-unifies `samples`. Identical subtrees are kept; applications with the
/// same operator and arity are generalized argument-wise; any other
/// difference becomes a hole over the whole differing subtree. Holes whose
/// per-sample values coincide are merged. Special forms (`cond`, `and`, `or`)
/// must line up exactly across samples.
pub fn generalize(samples: &[Expr], atomic_forms: &BTreeSet<String>) -> Result<Generalization, ShapeError> {
    if samples.len() < 2 {
        return Err(ShapeError::TooFewSamples(samples.len()));
    }
    let mut g = Generalizer { atomic: atomic_forms, holes: Vec::new() };
    let refs: Vec<&Expr> = samples.iter().collect();
    let mut path = Vec::new();
    let template = g.walk(&refs, &mut path)?;
    Ok(Generalization { template, holes: g.holes })
}

struct Generalizer<'a> {
    atomic: &'a BTreeSet<String>,
    holes: Vec<Hole>,
}

fn form_name(e: &Expr) -> String {
    match &e.kind {
        ExprKind::Cond { clauses, else_answer } => format!(
            "a cond with {} clause{}{}",
            clauses.len(),
            if clauses.len() == 1 { "" } else { "s" },
            if else_answer.is_some() { " and an else" } else { "" }
        ),
        ExprKind::And(a) => format!("an and of {} parts", a.len()),
        ExprKind::Or(a) => format!("an or of {} parts", a.len()),
        ExprKind::App { op, args } => format!("a call to {op} with {} arguments", args.len()),
        _ => "a plain value".to_string(),
    }
}

/// Same special-form kind and the same number of children in each slot.
fn same_special_shape(a: &Expr, b: &Expr) -> bool {
    match (&a.kind, &b.kind) {
        (ExprKind::Cond { clauses: c1, else_answer: e1 }, ExprKind::Cond { clauses: c2, else_answer: e2 }) => {
            c1.len() == c2.len() && e1.is_some() == e2.is_some()
        }
        (ExprKind::And(a1), ExprKind::And(a2)) | (ExprKind::Or(a1), ExprKind::Or(a2)) => a1.len() == a2.len(),
        _ => false,
    }
}

impl Generalizer<'_> {
    fn walk(&mut self, nodes: &[&Expr], path: &mut Path) -> Result<Expr, ShapeError> {
        let first = nodes[0];
        if nodes.iter().all(|n| *n == first) {
            let mut copy = first.clone();
            copy.strip_locations();
            return Ok(copy);
        }

        if nodes.iter().any(|n| n.is_special_form()) {
            if let Some((j, other)) = nodes.iter().enumerate().skip(1).find(|(_, n)| !same_special_shape(first, n)) {
                let (i, a, b) = if first.is_special_form() || !other.is_special_form() {
                    (0, first, *other)
                } else {
                    (j, *other, first)
                };
                let j = if i == 0 { j } else { 0 };
                return Err(ShapeError::Mismatch {
                    path: path.clone(),
                    first_sample: i + 1,
                    second_sample: j + 1,
                    first_form: form_name(a),
                    second_form: form_name(b),
                    first: a.span,
                    second: b.span,
                });
            }
            return self.descend(nodes, path);
        }

        if let ExprKind::App { op, args } = &first.kind {
            let aligned = !self.atomic.contains(op)
                && nodes.iter().all(|n| matches!(&n.kind, ExprKind::App { op: o, args: a } if o == op && a.len() == args.len()));
            if aligned {
                return self.descend(nodes, path);
            }
        }

        Ok(self.hole(nodes, path))
    }

    fn descend(&mut self, nodes: &[&Expr], path: &mut Path) -> Result<Expr, ShapeError> {
        let mut out = nodes[0].clone();
        out.strip_locations();
        let per_sample: Vec<Vec<&Expr>> = nodes.iter().map(|n| n.children()).collect();
        let mut generalized = Vec::with_capacity(per_sample[0].len());
        for i in 0..per_sample[0].len() {
            let column: Vec<&Expr> = per_sample.iter().map(|c| c[i]).collect();
            path.push(i);
            generalized.push(self.walk(&column, path)?);
            path.pop();
        }
        for (slot, g) in out.children_mut().into_iter().zip(generalized) {
            *slot = g;
        }
        Ok(out)
    }

    fn hole(&mut self, nodes: &[&Expr], path: &Path) -> Expr {
        let values: Vec<Expr> = nodes.iter().map(|n| (*n).clone()).collect();
        let id = match self.holes.iter().position(|h| h.values == values) {
            Some(id) => id,
            None => {
                self.holes.push(Hole { values, positions: Vec::new() });
                self.holes.len() - 1
            }
        };
        self.holes[id].positions.push(path.clone());
        Expr::hole(id)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn exprs(srcs: &[&str]) -> Vec<Expr> {
        srcs.iter().map(|s| parse_expr(s).unwrap()).collect()
    }

    fn gen(srcs: &[&str]) -> Result<Generalization, ShapeError> {
        generalize(&exprs(srcs), &default_atomic_forms())
    }

    #[test]
    fn area_samples() {
        let g = gen(&["(* 10 5)", "(* 50 2)", "(* 4 25)"]).unwrap();
        assert_eq!(g.template, Expr::app("*", vec![Expr::hole(0), Expr::hole(1)]));
        assert_eq!(g.holes[0].values, exprs(&["10", "50", "4"]));
        assert_eq!(g.holes[1].values, exprs(&["5", "2", "25"]));
        assert_eq!(g.holes[0].positions, vec![vec![0]]);
    }

    #[test]
    fn identical_samples_have_no_holes() {
        let g = gen(&["(* 10 5)", "(* 10 5)"]).unwrap();
        assert!(g.holes.is_empty());
        assert_eq!(g.template, parse_expr("(* 10 5)").unwrap());
    }

    #[test]
    fn equal_differences_share_a_hole() {
        let g = gen(&["(* 3 3)", "(* 4 4)"]).unwrap();
        assert_eq!(g.template, Expr::app("*", vec![Expr::hole(0), Expr::hole(0)]));
        assert_eq!(g.holes.len(), 1);
        assert_eq!(g.holes[0].positions, vec![vec![0], vec![1]]);
    }

    #[test]
    fn posns_are_single_values() {
        let g = gen(&["(f (make-posn 1 2) 3)", "(f (make-posn 1 5) 3)"]).unwrap();
        assert_eq!(g.template, Expr::app("f", vec![Expr::hole(0), Expr::num(3)]));
        let g = generalize(&exprs(&["(f (make-posn 1 2) 3)", "(f (make-posn 1 5) 3)"]), &BTreeSet::new()).unwrap();
        assert_eq!(
            g.template,
            Expr::app("f", vec![Expr::app("make-posn", vec![Expr::num(1), Expr::hole(0)]), Expr::num(3)])
        );
    }

    #[test]
    fn differing_operator_is_one_hole() {
        let g = gen(&["(+ 1 (* 2 3))", "(+ 1 (- 2 3))"]).unwrap();
        assert_eq!(g.template, Expr::app("+", vec![Expr::num(1), Expr::hole(0)]));
    }

    #[test]
    fn special_form_mismatch() {
        let err = gen(&["(cond [(< 1 2) 3] [else 4])", "(and #true #false)"]).unwrap_err();
        assert!(matches!(err, ShapeError::Mismatch { .. }), "{err}");
        let err = gen(&["(cond [(< 1 2) 3] [else 4])", "(cond [(< 1 2) 3])"]).unwrap_err();
        assert!(matches!(err, ShapeError::Mismatch { .. }));
        let err = gen(&["(+ 1 2)", "(+ 1 (and #true #true))"]).unwrap_err();
        let ShapeError::Mismatch { path, first_sample, .. } = err else { panic!() };
        assert_eq!(path, vec![1]);
        assert_eq!(first_sample, 2);
    }

    #[test]
    fn special_form_inside_hole_is_fine() {
        let g = gen(&["(f (make-posn 1 2))", "(f (make-posn 1 (cond [#true 1] [else 2])))"]).unwrap();
        assert_eq!(g.holes.len(), 1);
    }

    #[test]
    fn cond_samples_recurse() {
        let g = gen(&[
            "(cond [(string=? \"up\" \"up\") (up (make-posn 1 2))] [else (right (make-posn 1 2))])",
            "(cond [(string=? \"down\" \"up\") (up (make-posn 3 4))] [else (right (make-posn 3 4))])",
        ])
        .unwrap();
        assert_eq!(g.holes.len(), 2);
        assert_eq!(g.holes[0].values, exprs(&["\"up\"", "\"down\""]));
        assert_eq!(g.holes[1].positions, vec![vec![1, 0], vec![2, 0]]);
        for i in 0..2 {
            assert_eq!(g.instantiate(i), exprs(&[
                "(cond [(string=? \"up\" \"up\") (up (make-posn 1 2))] [else (right (make-posn 1 2))])",
                "(cond [(string=? \"down\" \"up\") (up (make-posn 3 4))] [else (right (make-posn 3 4))])",
            ])[i]);
        }
    }

    #[test]
    fn needs_two_samples() {
        assert_eq!(gen(&["(+ 1 2)"]).unwrap_err(), ShapeError::TooFewSamples(1));
    }
}
