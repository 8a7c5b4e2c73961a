//! Textual surface format for QIR terms.
//!
//! ```text
//! let f = \x. x = 2 in
//! Select[\t. f t."id"](Scan[@users]())
//! ```
//!
//! Lambdas are written `\x y. e`, application is juxtaposition, operators
//! are `Kind[config; ...](child, ...)`, tuples `{ "l": e, ... }`, lists
//! `e :: nil`, tables `@name` and host references `#n`. Comments use
//! `/* ... */`.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use thiserror::Error;

pub use parser::parse;
pub use printer::print;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct SourceSpan {
    pub start_line: usize,
    pub start_col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.start_line, self.start_col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub message: String,
    pub span: SourceSpan,
}
