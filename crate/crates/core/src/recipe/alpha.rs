use std::collections::HashMap;

use crate::syntax::{Expr, ExprKind};

/// Whether two function definitions are equal up to a consistent renaming
/// of their parameters (positionally). Free variables must match by name.
pub fn alpha_equivalent(params_a: &[String], body_a: &Expr, params_b: &[String], body_b: &Expr) -> bool {
    if params_a.len() != params_b.len() {
        return false;
    }
    let index_a: HashMap<&str, usize> = params_a.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    let index_b: HashMap<&str, usize> = params_b.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    first_difference(body_a, body_b, &mut |a, b| match (&a.kind, &b.kind) {
        (ExprKind::Var(x), ExprKind::Var(y)) => match (index_a.get(x.as_str()), index_b.get(y.as_str())) {
            (Some(i), Some(j)) => Some(i == j),
            (None, None) => Some(x == y),
            _ => Some(false),
        },
        _ => None,
    })
    .is_none()
}

/// Matches `body` against a generalization template, returning for every
/// hole the index of the parameter that fills it. Each hole must be filled
/// by one parameter everywhere, distinct holes by distinct parameters, and
/// parameters may not appear outside holes.
pub fn match_template(template: &Expr, params: &[String], body: &Expr) -> Result<Vec<usize>, Mismatch> {
    let index: HashMap<&str, usize> = params.iter().enumerate().map(|(i, p)| (p.as_str(), i)).collect();
    let mut hole_to_param: HashMap<usize, usize> = HashMap::new();
    let mut param_to_hole: HashMap<usize, usize> = HashMap::new();
    let diff = first_difference(template, body, &mut |t, b| {
        Some(match (&t.kind, &b.kind) {
            (ExprKind::Hole(h), ExprKind::Var(v)) => match index.get(v.as_str()) {
                Some(&p) => {
                    let a = *hole_to_param.entry(*h).or_insert(p);
                    let c = *param_to_hole.entry(p).or_insert(*h);
                    a == p && c == *h
                }
                None => false,
            },
            (ExprKind::Hole(_), _) => false,
            (ExprKind::Var(x), ExprKind::Var(y)) => x == y && !index.contains_key(y.as_str()),
            _ => return None,
        })
    });
    if let Some((t, b)) = diff {
        return Err(Mismatch { expected: t.clone(), found: b.clone() });
    }
    let mut out = Vec::with_capacity(hole_to_param.len());
    for h in 0..hole_to_param.len() {
        match hole_to_param.get(&h) {
            Some(&p) => out.push(p),
            None => return Err(Mismatch { expected: template.clone(), found: body.clone() }),
        }
    }
    Ok(out)
}

/// The first template node the body disagrees with, and the body node found
/// there.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub expected: Expr,
    pub found: Expr,
}

/// First pair of nodes, in pre-order, where `a` and `b` differ. `leaf` may
/// decide a pair (returning `Some`) before the kind-by-kind comparison.
fn first_difference<'a, 'b>(
    a: &'a Expr,
    b: &'b Expr,
    leaf: &mut impl FnMut(&Expr, &Expr) -> Option<bool>,
) -> Option<(&'a Expr, &'b Expr)> {
    if let Some(v) = leaf(a, b) {
        return if v { None } else { Some((a, b)) };
    }
    let same_node = match (&a.kind, &b.kind) {
        (ExprKind::Num(x), ExprKind::Num(y)) => x == y,
        (ExprKind::Str(x), ExprKind::Str(y)) => x == y,
        (ExprKind::Bool(x), ExprKind::Bool(y)) => x == y,
        (ExprKind::Var(x), ExprKind::Var(y)) => x == y,
        (ExprKind::Hole(x), ExprKind::Hole(y)) => x == y,
        (ExprKind::App { op: o1, args: a1 }, ExprKind::App { op: o2, args: a2 }) => o1 == o2 && a1.len() == a2.len(),
        (ExprKind::Cond { clauses: c1, else_answer: e1 }, ExprKind::Cond { clauses: c2, else_answer: e2 }) => {
            c1.len() == c2.len() && e1.is_some() == e2.is_some()
        }
        (ExprKind::And(x), ExprKind::And(y)) | (ExprKind::Or(x), ExprKind::Or(y)) => x.len() == y.len(),
        _ => false,
    };
    if !same_node {
        return Some((a, b));
    }
    a.children().into_iter().zip(b.children()).find_map(|(x, y)| first_difference(x, y, leaf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_expr;

    fn names(ns: &[&str]) -> Vec<String> {
        ns.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn renaming() {
        let a = parse_expr("(* length width)").unwrap();
        let b = parse_expr("(* l w)").unwrap();
        assert!(alpha_equivalent(&names(&["length", "width"]), &a, &names(&["l", "w"]), &b));
        assert!(!alpha_equivalent(&names(&["length", "width"]), &a, &names(&["w", "l"]), &b));
        let c = parse_expr("(* l HALF)").unwrap();
        assert!(!alpha_equivalent(&names(&["l", "HALF"]), &c, &names(&["l", "w"]), &c));
    }

    #[test]
    fn template_mapping() {
        let t = Expr::app(
            "f",
            vec![Expr::app("g", vec![Expr::hole(0)]), Expr::hole(1), Expr::hole(0)],
        );
        let body = parse_expr("(f (g dir) rocket dir)").unwrap();
        assert_eq!(match_template(&t, &names(&["rocket", "dir"]), &body).unwrap(), vec![1, 0]);
        let bad = parse_expr("(f (g dir) rocket rocket)").unwrap();
        let m = match_template(&t, &names(&["rocket", "dir"]), &bad).unwrap_err();
        assert_eq!(m.expected, Expr::hole(0));
        let wrong_op = parse_expr("(f (h dir) rocket dir)").unwrap();
        assert!(match_template(&t, &names(&["rocket", "dir"]), &wrong_op).is_err());
        let constant = parse_expr("(f (g 1) rocket dir)").unwrap();
        assert!(match_template(&t, &names(&["rocket", "dir"]), &constant).is_err());
    }
}
