//! Finding the one contraction that brings a subterm closer to being
//! reduced: `make_redex`, `contract_lam` and `inline_var`.

use super::contexts::{cfg_free_vars, cfg_redexes, op_children};
use crate::alpha::binder_of;
use crate::ast::{Expr, ExprKind, FunKind, Path, Value};
use crate::reduce::{contract, redex_kind, RedexKind};

/// One contraction performed by the heuristic.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub at: Path,
    pub kind: RedexKind,
    pub result: Expr,
}

fn contract_at(e: &Expr, at: &Path) -> Option<Step> {
    let kind = redex_kind(e.at(at)?)?;
    let result = contract(e, at).ok()?;
    Some(Step {
        at: at.clone(),
        kind,
        result,
    })
}

/// Contracts the subterm at `sub` if it is a redex, otherwise the redex
/// needed before it can become one.
pub fn make_redex(e: &Expr, sub: &Path) -> Option<Step> {
    let node = e.at(sub)?;
    if redex_kind(node).is_some() {
        return contract_at(e, sub);
    }
    match node.kind() {
        ExprKind::Var(_) => inline_var(e, sub),
        ExprKind::App(..) | ExprKind::ListDestr(..) | ExprKind::TupDestr(..) => make_redex(e, &sub.child(0)),
        ExprKind::ValueFun(k, args) => blocking_operand(*k, args).and_then(|i| make_redex(e, &sub.child(i))),
        _ => None,
    }
}

/// The operand of a stuck primitive that must be reduced first, or `None`
/// when the application can never fire.
fn blocking_operand(kind: FunKind, args: &[Expr]) -> Option<usize> {
    let is_const = |a: &Expr| matches!(a.kind(), ExprKind::Const(_));
    let is_num = |a: &Expr| matches!(a.kind(), ExprKind::Const(Value::Number(_)));
    match kind {
        FunKind::IfThenElse | FunKind::And | FunKind::Or | FunKind::Not | FunKind::Neg => {
            (!is_const(&args[0])).then_some(0)
        }
        FunKind::Add | FunKind::Sub | FunKind::Mul | FunKind::Div => {
            args.iter().position(|a| !is_num(a)).filter(|&i| !is_const(&args[i]))
        }
        FunKind::Eq | FunKind::Lt | FunKind::Gt => args.iter().position(|a| !is_const(a)),
    }
}

/// Contracts the redex the subterm at `sub` takes part in, or the redex
/// needed before it can take part in one.
pub fn contract_lam(e: &Expr, sub: &Path) -> Option<Step> {
    let (parent, _) = sub.split_last()?;
    match e.at(&parent)?.kind() {
        ExprKind::App(..) | ExprKind::ListDestr(..) | ExprKind::TupDestr(..) | ExprKind::ValueFun(..) => {
            make_redex(e, &parent)
        }
        ExprKind::Lam(..) | ExprKind::ListCons(..) | ExprKind::TupCons(..) => contract_lam(e, &parent),
        _ => None,
    }
}

/// Works towards substituting the variable at `var` by its definition:
/// `None` when the variable is free in `e`.
pub fn inline_var(e: &Expr, var: &Path) -> Option<Step> {
    let binder = binder_of(e, var)?;
    contract_lam(e, &binder)
}

/// Inlines the first inlinable free variable of the configurations, or else
/// contracts their leftmost-outermost redex.
pub fn one_step_config(e: &Expr, ctx: &Path) -> Option<Step> {
    let vars = cfg_free_vars(e, ctx).ok()?;
    if let Some(step) = vars.iter().find_map(|v| inline_var(e, v)) {
        return Some(step);
    }
    let redexes = cfg_redexes(e, ctx).ok()?;
    contract_at(e, redexes.first()?)
}

/// Works on the first child of the operator at `ctx` where progress is
/// possible.
pub fn one_step_child(e: &Expr, ctx: &Path) -> Option<Step> {
    op_children(e, ctx).ok()?.iter().find_map(|c| make_redex(e, c))
}
