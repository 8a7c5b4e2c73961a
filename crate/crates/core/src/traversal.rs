//! The traversal order used to reason about the heuristic's recursive calls.
//!
//! Lambdas and constructors are visited before their children, every other
//! node with children after them, and leaves when reached.

use crate::ast::{Expr, ExprKind, Path};
use crate::error::Error;

fn visited_first(e: &Expr) -> bool {
    matches!(
        e.kind(),
        ExprKind::Lam(..) | ExprKind::ListCons(..) | ExprKind::TupCons(..)
    )
}

/// Every node path of `e`, listed in traversal order.
pub fn traversal_order(e: &Expr) -> Vec<Path> {
    fn go(e: &Expr, path: &mut Path, out: &mut Vec<Path>) {
        let children = e.children();
        let pre = children.is_empty() || visited_first(e);
        if pre {
            out.push(path.clone());
        }
        for (i, c) in children.into_iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
        if !pre {
            out.push(path.clone());
        }
    }
    let mut out = Vec::new();
    go(e, &mut Path::root(), &mut out);
    out
}

/// Position of the node at `path` in the traversal of `e`.
pub fn traversal_pos(e: &Expr, path: &Path) -> Result<usize, Error> {
    e.at_checked(path)?;
    // Count nodes visited before the target without materializing the order.
    fn count_before(e: &Expr, rest: &[usize]) -> usize {
        let children = e.children();
        let pre = children.is_empty() || visited_first(e);
        match rest.split_first() {
            None => {
                if pre {
                    0
                } else {
                    children.iter().map(|c| c.size()).sum()
                }
            }
            Some((&i, tail)) => {
                let own = usize::from(pre);
                let left: usize = children[..i].iter().map(|c| c.size()).sum();
                own + left + count_before(children[i], tail)
            }
        }
    }
    Ok(count_before(e, path.as_slice()))
}
