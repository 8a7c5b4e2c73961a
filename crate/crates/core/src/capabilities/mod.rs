//! What a target database can evaluate natively.

mod plan;
mod sql;

pub use plan::{emit_plan, Plan, SqlPart};
pub use sql::SqlCapabilities;

use crate::alpha::free_vars;
use crate::ast::{Expr, OpKind, Path};
use crate::error::Error;

/// A description of a database's native capabilities.
///
/// `supports_config` must be stable under reduction: if it accepts some
/// configurations, it accepts every reduct of them. Implementations are
/// queried concurrently and must not keep state.
pub trait Capabilities: Send + Sync {
    fn supports_operator(&self, kind: OpKind) -> bool;

    fn supports_config(&self, kind: OpKind, configs: &[Expr]) -> bool;

    /// Translates a tree of compatible operators into a query string.
    fn emit_fragment(&self, root: &Expr) -> Result<String, Error> {
        let _ = root;
        Err(Error::Emit {
            path: Path::root(),
            reason: "this backend has no query language".into(),
        })
    }
}

impl<C: Capabilities + ?Sized> Capabilities for &C {
    fn supports_operator(&self, kind: OpKind) -> bool {
        (**self).supports_operator(kind)
    }

    fn supports_config(&self, kind: OpKind, configs: &[Expr]) -> bool {
        (**self).supports_config(kind, configs)
    }

    fn emit_fragment(&self, root: &Expr) -> Result<String, Error> {
        (**self).emit_fragment(root)
    }
}

/// Supports every operator whose configurations are closed terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct ClosedConfigCapabilities;

impl Capabilities for ClosedConfigCapabilities {
    fn supports_operator(&self, _: OpKind) -> bool {
        true
    }

    fn supports_config(&self, _: OpKind, configs: &[Expr]) -> bool {
        configs.iter().all(|c| free_vars(c).is_empty())
    }
}
