//! Normal-order (leftmost-outermost) reduction.

use super::rules::{contract, redex_kind, RedexKind};
use crate::ast::{Expr, Path};

/// The leftmost-outermost redex: the first redex met in pre-order.
pub fn leftmost_outermost(e: &Expr) -> Option<(Path, RedexKind)> {
    fn go(e: &Expr, path: &mut Path) -> Option<(Path, RedexKind)> {
        if let Some(k) = redex_kind(e) {
            return Some((path.clone(), k));
        }
        for (i, c) in e.children().into_iter().enumerate() {
            path.push(i);
            let found = go(c, path);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        None
    }
    go(e, &mut Path::root())
}

/// Contracts the leftmost-outermost redex; `None` on normal forms.
pub fn normal_order_step(e: &Expr) -> Option<Expr> {
    let (p, _) = leftmost_outermost(e)?;
    Some(contract(e, &p).expect("redex found by search"))
}

#[derive(Clone, Debug)]
pub struct Normalized {
    pub result: Expr,
    pub steps: usize,
    pub normal: bool,
}

/// Iterates [`normal_order_step`] at most `max_steps` times.
pub fn normalize(e: &Expr, max_steps: usize) -> Normalized {
    let mut cur = e.clone();
    for steps in 0..max_steps {
        match normal_order_step(&cur) {
            Some(next) => cur = next,
            None => {
                return Normalized {
                    result: cur,
                    steps,
                    normal: true,
                }
            }
        }
    }
    let normal = leftmost_outermost(&cur).is_none();
    Normalized {
        result: cur,
        steps: max_steps,
        normal,
    }
}
