//! Big-step evaluator with expression coverage, the three-check test engine,
//! and the fixed LCG behind `random`.

mod interp;
mod report;
mod rng;
mod value;

pub use interp::{evaluate, is_builtin, Env, EvalError, EvalErrorKind, Interpreter, BUILTINS};
pub use report::{
    render_report, report_json, run_program, run_test, CoverageReport, FunctionCoverage, TestRecord, TestReport,
    TestStatus, UncoveredSpan,
};
pub use rng::RngState;
pub use value::{ImageExpr, Mode, Posn, Value};
