//! Audits a function definition against the nine design-recipe steps.

mod alpha;
mod check;
mod report;

pub use alpha::{alpha_equivalent, match_template, Mismatch};
pub use check::{check_recipe, RecipeConfig, UnknownFunction};
pub use report::{Diagnostic, RecipeReport, Severity, Status, StepVerdict, STEP_TITLES};
