//! Expansion of surface sugar into core terms.

use crate::ast::{Expr, ExprKind, Sugar};

/// The call-by-name fixpoint combinator `(λa.λf. f (a a f)) (λa.λf. f (a a f))`.
pub fn turing_fixpoint() -> Expr {
    let half = Expr::lam(
        "a",
        Expr::lam(
            "f",
            Expr::app(
                Expr::var("f"),
                Expr::apps(Expr::var("a"), [Expr::var("a"), Expr::var("f")]),
            ),
        ),
    );
    Expr::app(half.clone(), half)
}

/// Removes every sugar node:
///
/// * `let x = d in b` becomes `(λx. b) d`
/// * `let rec f = d in b` becomes `(λf. b) (Θ (λf. d))`
/// * `e."l"` becomes `tdestr e "l"`
/// * `not e` becomes `if e then false else true`
pub fn desugar(e: &Expr) -> Expr {
    if !e.contains_sugar() {
        return e.clone();
    }
    let children: Vec<Expr> = e.children().into_iter().map(desugar).collect();
    let rebuilt = e.with_children(children);
    let ExprKind::Sugar(s) = rebuilt.kind() else {
        return rebuilt;
    };
    let core = match &**s {
        Sugar::Let(x, d, b) => Expr::app(Expr::lam(x.clone(), b.clone()), d.clone()),
        Sugar::LetRec(f, d, b) => Expr::app(
            Expr::lam(f.clone(), b.clone()),
            Expr::app(turing_fixpoint(), Expr::lam(f.clone(), d.clone())),
        ),
        Sugar::Dot(t, l) => Expr::tdestr(t.clone(), l.clone()),
        Sugar::Not(c) => Expr::if_then_else(c.clone(), Expr::bool(false), Expr::bool(true)),
    };
    core.set_id(rebuilt.id())
}

/// Writes every applied lambda `(λx. b) d` back as `let x = d in b`, for
/// display. The result desugars to `e`.
pub fn resugar(e: &Expr) -> Expr {
    let children: Vec<Expr> = e.children().into_iter().map(resugar).collect();
    let rebuilt = if children.is_empty() {
        e.clone()
    } else {
        e.with_children(children)
    };
    match rebuilt.kind() {
        ExprKind::App(f, d) => match f.kind() {
            ExprKind::Lam(x, b) => Expr::let_in(x.clone(), d.clone(), b.clone()).set_id(rebuilt.id()),
            _ => rebuilt,
        },
        _ => rebuilt,
    }
}
