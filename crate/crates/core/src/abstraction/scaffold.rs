use super::synthesize::SynthesizedFunction;
use crate::signature::Signature;
use crate::syntax::{print_program, CommentBlock, Definition, FloatingComment, Program};

pub const MISSING_FRESH_TESTS: &str = "; TODO: add tests with new concrete values";

/// Source text laying out a synthesized function in recipe order: sample
/// constants, tests, signature, purpose, then the definition.
pub fn generate_scaffold(sf: &SynthesizedFunction, signature: &Signature) -> String {
    print_program(&scaffold_program(sf, signature))
}

pub fn scaffold_program(sf: &SynthesizedFunction, signature: &Signature) -> Program {
    let mut definitions = Vec::new();
    for (i, (name, expr)) in sf.samples.iter().enumerate() {
        let def = Definition::constant(name.clone(), expr.clone());
        definitions.push(if i == 0 { def.with_comments(["; Sample Expressions"]) } else { def });
    }
    for (i, t) in sf.variable_tests.iter().chain(&sf.fresh_tests).enumerate() {
        let def = Definition::test(t.clone());
        definitions.push(if i == 0 { def.with_comments(["; Tests"]) } else { def });
    }
    let mut floating_comments = Vec::new();
    if sf.fresh_tests.is_empty() {
        floating_comments.push(FloatingComment {
            before: definitions.len(),
            block: CommentBlock::new(vec![MISSING_FRESH_TESTS.to_string()]),
        });
    }
    definitions.push(sf.definition().with_comments([signature.comment_line(), format!("; Purpose: {}", sf.purpose)]));
    Program { definitions, floating_comments, source: String::new() }
}
