//! QIR: a query intermediate representation based on the lambda calculus,
//! with reduction strategies that move database operators into fragments a
//! target database can evaluate natively.

pub mod alpha;
pub mod ast;
pub mod capabilities;
pub mod error;
pub mod exhaustive;
pub mod heuristic;
pub mod measure;
pub mod reduce;
pub mod sugar;
pub mod syntax;
pub mod traversal;

pub use alpha::{alpha_eq, fingerprint, free_vars};
pub use ast::{BuiltinKind, Expr, ExprKind, FunKind, Name, NodeId, OpKind, OperatorNode, Path, Sugar, Value};
pub use capabilities::{Capabilities, ClosedConfigCapabilities, SqlCapabilities};
pub use error::Error;
pub use exhaustive::{explore_reductions, ExploreResult};
pub use heuristic::{min_red, HeuristicOutcome};
pub use measure::{measure_of, Measure};
pub use sugar::{desugar, resugar};
pub use syntax::{parse, print, ParseError, SourceSpan};
