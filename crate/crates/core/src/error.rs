use thiserror::Error;

use crate::ast::{OpKind, Path};
use crate::syntax::ParseError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{kind} takes {} configuration(s) and {} child(ren), got {configs} and {children}", kind.config_arity(), kind.child_arity())]
    Arity {
        kind: OpKind,
        configs: usize,
        children: usize,
    },

    #[error("no such subexpression at {0}")]
    NoSuchSubexpression(Path),

    #[error("subterm at {0} is not a redex")]
    NotARedex(Path),

    #[error("subterm at {0} is not an operator")]
    NotAnOperator(Path),

    #[error("subterm at {0} is not a variable")]
    NotAVariable(Path),

    #[error("identifier {0} does not occur in the initial term")]
    UnknownIdentifier(u32),

    #[error("subterm at {0} survives the contraction")]
    SubtermSurvives(Path),

    #[error("trace step {index} does not replay: {reason}")]
    InvalidTrace { index: usize, reason: String },

    #[error("cannot emit SQL: {reason} at {path}")]
    Emit { path: Path, reason: String },

    #[error(transparent)]
    Parse(#[from] ParseError),
}
