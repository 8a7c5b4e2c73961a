//! The β, δ and ρ rules.

use std::fmt;

use super::subst::substitute;
use crate::ast::{Expr, ExprKind, FunKind, Path, Value};
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RedexKind {
    Beta,
    DeltaListNil,
    DeltaListCons,
    DeltaTupHit,
    DeltaTupMiss,
    RhoIfTrue,
    RhoIfFalse,
    RhoAnd,
    RhoOr,
    RhoNot,
    RhoArith,
    RhoCompare,
}

impl fmt::Display for RedexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

fn constant(e: &Expr) -> Option<&Value> {
    match e.kind() {
        ExprKind::Const(v) => Some(v),
        _ => None,
    }
}

fn number(e: &Expr) -> Option<f64> {
    match constant(e)? {
        Value::Number(n) => Some(*n),
        _ => None,
    }
}

/// The rule applying at the root of `e`, if any.
///
/// `and`/`or` fire on a Boolean left operand, arithmetic needs numeric
/// operands, `=` compares two constants of the same type and `<`/`>`
/// compare two numbers or two strings. Ill-typed applications are stuck.
pub fn redex_kind(e: &Expr) -> Option<RedexKind> {
    use ExprKind::*;
    match e.kind() {
        App(f, _) if matches!(f.kind(), Lam(..)) => Some(RedexKind::Beta),
        ListDestr(s, ..) => match s.kind() {
            ListNil => Some(RedexKind::DeltaListNil),
            ListCons(..) => Some(RedexKind::DeltaListCons),
            _ => None,
        },
        TupDestr(s, l) => match s.kind() {
            TupCons(l1, ..) if l1 == l => Some(RedexKind::DeltaTupHit),
            TupCons(..) => Some(RedexKind::DeltaTupMiss),
            _ => None,
        },
        ValueFun(k, args) => match k {
            FunKind::IfThenElse => match args[0].as_bool()? {
                true => Some(RedexKind::RhoIfTrue),
                false => Some(RedexKind::RhoIfFalse),
            },
            FunKind::And => args[0].as_bool().map(|_| RedexKind::RhoAnd),
            FunKind::Or => args[0].as_bool().map(|_| RedexKind::RhoOr),
            FunKind::Not => args[0].as_bool().map(|_| RedexKind::RhoNot),
            FunKind::Neg => number(&args[0]).map(|_| RedexKind::RhoArith),
            FunKind::Add | FunKind::Sub | FunKind::Mul | FunKind::Div => {
                (number(&args[0]).is_some() && number(&args[1]).is_some()).then_some(RedexKind::RhoArith)
            }
            FunKind::Eq => match (constant(&args[0])?, constant(&args[1])?) {
                (Value::Number(_), Value::Number(_))
                | (Value::String(_), Value::String(_))
                | (Value::Bool(_), Value::Bool(_)) => Some(RedexKind::RhoCompare),
                _ => None,
            },
            FunKind::Lt | FunKind::Gt => match (constant(&args[0])?, constant(&args[1])?) {
                (Value::Number(_), Value::Number(_)) | (Value::String(_), Value::String(_)) => {
                    Some(RedexKind::RhoCompare)
                }
                _ => None,
            },
        },
        _ => None,
    }
}

/// Every redex of `e` with its kind, in pre-order (outermost first, then
/// left to right).
pub fn redexes(e: &Expr) -> Vec<(Path, RedexKind)> {
    let mut out = Vec::new();
    e.for_each_node(&mut |p, n| {
        if let Some(k) = redex_kind(n) {
            out.push((p.clone(), k));
        }
    });
    out
}

/// Contracts the redex at the root of `e`. The result keeps the identifiers
/// of every surviving subterm; nodes built by a rule carry none.
pub fn contract_root(e: &Expr) -> Option<Expr> {
    use ExprKind::*;
    let kind = redex_kind(e)?;
    let out = match (kind, e.kind()) {
        (RedexKind::Beta, App(f, a)) => {
            let Lam(x, b) = f.kind() else { unreachable!() };
            substitute(b, x, a)
        }
        (RedexKind::DeltaListNil, ListDestr(_, n, _)) => n.clone(),
        (RedexKind::DeltaListCons, ListDestr(s, _, c)) => {
            let ListCons(h, t) = s.kind() else { unreachable!() };
            Expr::apps(c.clone(), [h.clone(), t.clone()])
        }
        (RedexKind::DeltaTupHit, TupDestr(s, _)) => {
            let TupCons(_, v, _) = s.kind() else { unreachable!() };
            v.clone()
        }
        (RedexKind::DeltaTupMiss, TupDestr(s, l)) => {
            let TupCons(_, _, t) = s.kind() else { unreachable!() };
            Expr::tdestr(t.clone(), l.clone())
        }
        (RedexKind::RhoIfTrue, ValueFun(_, args)) => args[1].clone(),
        (RedexKind::RhoIfFalse, ValueFun(_, args)) => args[2].clone(),
        (RedexKind::RhoAnd, ValueFun(_, args)) => match args[0].as_bool()? {
            true => args[1].clone(),
            false => Expr::bool(false),
        },
        (RedexKind::RhoOr, ValueFun(_, args)) => match args[0].as_bool()? {
            true => Expr::bool(true),
            false => args[1].clone(),
        },
        (RedexKind::RhoNot, ValueFun(_, args)) => Expr::bool(!args[0].as_bool()?),
        (RedexKind::RhoArith, ValueFun(k, args)) => {
            let a = number(&args[0])?;
            Expr::num(match k {
                FunKind::Neg => -a,
                FunKind::Add => a + number(&args[1])?,
                FunKind::Sub => a - number(&args[1])?,
                FunKind::Mul => a * number(&args[1])?,
                FunKind::Div => a / number(&args[1])?,
                _ => return None,
            })
        }
        (RedexKind::RhoCompare, ValueFun(k, args)) => {
            let (a, b) = (constant(&args[0])?, constant(&args[1])?);
            Expr::bool(match (k, a, b) {
                (FunKind::Eq, a, b) => a == b,
                (FunKind::Lt, Value::Number(a), Value::Number(b)) => a < b,
                (FunKind::Gt, Value::Number(a), Value::Number(b)) => a > b,
                (FunKind::Lt, Value::String(a), Value::String(b)) => a < b,
                (FunKind::Gt, Value::String(a), Value::String(b)) => a > b,
                _ => return None,
            })
        }
        _ => return None,
    };
    Some(out)
}

/// Contracts the redex at `at`, leaving the rest of `e` unchanged.
pub fn contract(e: &Expr, at: &Path) -> Result<Expr, Error> {
    let node = e.at_checked(at)?;
    let reduct = contract_root(node).ok_or_else(|| Error::NotARedex(at.clone()))?;
    e.replace_at(at, reduct)
}

/// All one-step reducts of `e`, in the order of [`redexes`].
pub fn one_step_reducts(e: &Expr) -> Vec<(Path, RedexKind, Expr)> {
    redexes(e)
        .into_iter()
        .map(|(p, k)| {
            let r = contract(e, &p).expect("enumerated redex contracts");
            (p, k, r)
        })
        .collect()
}
