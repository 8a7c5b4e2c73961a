//! Capture-avoiding substitution.

use std::collections::HashSet;

use crate::alpha::{free_vars, is_free_in};
use crate::ast::{Expr, ExprKind, Name};
use crate::sugar::desugar;

/// `body{arg/name}`. Bound variables of `body` that would capture a free
/// variable of `arg` are renamed. Every inserted copy of `arg` keeps the
/// identifiers of `arg`'s nodes.
pub fn substitute(body: &Expr, name: &str, arg: &Expr) -> Expr {
    let owned;
    let body = if body.contains_sugar() {
        owned = desugar(body);
        &owned
    } else {
        body
    };
    let arg_fv: HashSet<Name> = free_vars(arg).into_iter().collect();
    subst(body, name, arg, &arg_fv).unwrap_or_else(|| body.clone())
}

/// `None` when `name` does not occur free in `e`.
fn subst(e: &Expr, name: &str, arg: &Expr, arg_fv: &HashSet<Name>) -> Option<Expr> {
    match e.kind() {
        ExprKind::Var(x) => (&**x == name).then(|| arg.clone()),
        ExprKind::Lam(y, _) if &**y == name => None,
        ExprKind::Lam(y, b) if arg_fv.contains(y) => {
            if !is_free_in(name, b) {
                return None;
            }
            let avoid = |c: &str| arg_fv.contains(c) || is_free_in(c, b);
            let fresh = fresh_name(y, avoid);
            let renamed = rename(b, y, &fresh).unwrap_or_else(|| b.clone());
            let inner = subst(&renamed, name, arg, arg_fv).unwrap_or(renamed);
            Some(Expr::with_id(ExprKind::Lam(fresh, inner), e.id()))
        }
        _ => rebuild(e, |c| subst(c, name, arg, arg_fv)),
    }
}

/// Applies `f` to every child, or returns `None` if it changed none.
fn rebuild(e: &Expr, mut f: impl FnMut(&Expr) -> Option<Expr>) -> Option<Expr> {
    let children = e.children();
    let mut new: Option<Vec<Expr>> = None;
    for (i, c) in children.iter().enumerate() {
        if let Some(n) = f(c) {
            new.get_or_insert_with(|| children[..i].iter().map(|&c| c.clone()).collect())
                .push(n);
        } else if let Some(v) = new.as_mut() {
            v.push((*c).clone());
        }
    }
    new.map(|v| e.with_children(v))
}

/// Renames the free occurrences of `from` in `e` to `to`, keeping the
/// identifiers of the renamed variable nodes; `None` when there are none.
/// `to` must not be bound inside `e` above an occurrence of `from`.
fn rename(e: &Expr, from: &str, to: &Name) -> Option<Expr> {
    match e.kind() {
        ExprKind::Var(x) if &**x == from => Some(Expr::with_id(ExprKind::Var(to.clone()), e.id())),
        ExprKind::Lam(y, _) if &**y == from => None,
        _ => rebuild(e, |c| rename(c, from, to)),
    }
}

/// The name `base$k` with the smallest `k ≥ 1` rejected by `taken`, where
/// `base` is `name` without any previous `$k` suffix.
pub fn fresh_name(name: &str, taken: impl Fn(&str) -> bool) -> Name {
    let base = match name.rsplit_once('$') {
        Some((b, k)) if !b.is_empty() && !k.is_empty() && k.bytes().all(|c| c.is_ascii_digit()) => b,
        _ => name,
    };
    (1u64..)
        .map(|k| format!("{base}${k}"))
        .find(|c| !taken(c))
        .map(Name::from)
        .expect("unbounded counter")
}
