//! Operator contexts and what the heuristic looks at inside them.

use crate::alpha::free_var_occurrences;
use crate::ast::{Expr, OperatorNode, Path};
use crate::error::Error;
use crate::reduce::redexes;
use crate::traversal::traversal_order;

/// Paths of every operator of `e` in traversal order: left to right, each
/// operator after the operators of its configurations and children.
pub fn op_contexts(e: &Expr) -> Vec<Path> {
    traversal_order(e)
        .into_iter()
        .filter(|p| e.at(p).is_some_and(Expr::is_operator))
        .collect()
}

fn operator_at<'e>(e: &'e Expr, ctx: &Path) -> Result<&'e OperatorNode, Error> {
    e.at_checked(ctx)?
        .as_operator()
        .ok_or_else(|| Error::NotAnOperator(ctx.clone()))
}

/// Occurrences of variables that are free in the configurations of the
/// operator at `ctx`, in configuration order then depth-first.
pub fn cfg_free_vars(e: &Expr, ctx: &Path) -> Result<Vec<Path>, Error> {
    let op = operator_at(e, ctx)?;
    Ok(op
        .configs()
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            free_var_occurrences(c)
                .into_iter()
                .map(move |(p, _)| ctx.child(i).join(&p))
        })
        .collect())
}

/// Redexes inside the configurations of the operator at `ctx`, in
/// configuration order then pre-order.
pub fn cfg_redexes(e: &Expr, ctx: &Path) -> Result<Vec<Path>, Error> {
    let op = operator_at(e, ctx)?;
    Ok(op
        .configs()
        .iter()
        .enumerate()
        .flat_map(|(i, c)| redexes(c).into_iter().map(move |(p, _)| ctx.child(i).join(&p)))
        .collect())
}

/// Paths of the child slots of the operator at `ctx`.
pub fn op_children(e: &Expr, ctx: &Path) -> Result<Vec<Path>, Error> {
    let op = operator_at(e, ctx)?;
    let n = op.configs().len();
    Ok((0..op.children().len()).map(|i| ctx.child(n + i)).collect())
}
