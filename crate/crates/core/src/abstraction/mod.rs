//! From sample expressions to a function: anti-unification, parameter
//! naming and typing, test generation, and the recipe-ordered scaffold.

mod generalize;
mod scaffold;
mod synthesize;

pub use generalize::{default_atomic_forms, generalize, Generalization, Hole, ShapeError, DEFAULT_ATOMIC_FORMS};
pub use scaffold::{generate_scaffold, scaffold_program, MISSING_FRESH_TESTS};
pub use synthesize::{default_param_names, synthesize, SynthesisError, SynthesisRequest, SynthesizedFunction};
