//! Reader and printer for the teaching-language subset: definitions,
//! `cond`/`and`/`or`, the three `check-*` forms and plain applications.

mod ast;
mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use ast::*;
pub use parser::{parse_expr, parse_program};
pub use printer::{print_definition, print_expr, print_program};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}

impl ParseError {
    pub fn new(message: impl Into<String>, span: SourceSpan) -> Self {
        Self { message: message.into(), span }
    }
}
