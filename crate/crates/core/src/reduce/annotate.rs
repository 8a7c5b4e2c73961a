//! Identifier-annotated terms and occurrence tracking.
//!
//! Identifiers are propagated unchanged by substitution and contraction, so
//! the nodes of a reduct carrying identifier `i` are the occurrences of the
//! initial subterm annotated with `i`.

use std::collections::HashSet;

use super::rules::{contract, redex_kind, RedexKind};
use super::trace::ReductionTrace;
use crate::ast::{Expr, ExprKind, NodeId, Path};
use crate::error::Error;

/// Attaches a distinct identifier to every node. Numbering starts at 1 and
/// follows pre-order, except that application nodes are numbered after all
/// other nodes, so identifiers follow the textual order of binders and
/// leaves.
pub fn annotate(e: &Expr) -> Expr {
    let mut non_app = 0u32;
    e.for_each_node(&mut |_, n| {
        if !matches!(n.kind(), ExprKind::App(..)) {
            non_app += 1;
        }
    });
    let mut next_leaf = 1u32;
    let mut next_app = non_app + 1;
    fn go(e: &Expr, next_leaf: &mut NodeId, next_app: &mut NodeId) -> Expr {
        let id = if matches!(e.kind(), ExprKind::App(..)) {
            *next_app += 1;
            *next_app - 1
        } else {
            *next_leaf += 1;
            *next_leaf - 1
        };
        let children = e.children().into_iter().map(|c| go(c, next_leaf, next_app)).collect();
        e.with_children(children).set_id(Some(id))
    }
    go(e, &mut next_leaf, &mut next_app)
}

/// Paths of the nodes of `e` carrying identifier `id`, in pre-order.
pub fn paths_with_id(e: &Expr, id: NodeId) -> Vec<Path> {
    let mut out = Vec::new();
    e.for_each_node(&mut |p, n| {
        if n.id() == Some(id) {
            out.push(p.clone())
        }
    });
    out
}

/// The occurrences, in the trace's final term, of the initial subterm
/// annotated with `id`.
pub fn occurrences_of(trace: &ReductionTrace, id: NodeId) -> Result<Vec<Path>, Error> {
    if paths_with_id(trace.initial(), id).is_empty() {
        return Err(Error::UnknownIdentifier(id));
    }
    Ok(paths_with_id(trace.final_term(), id))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Disappearance {
    /// The subterm was part of the contracted redex.
    Consumed,
    /// The subterm sat in a part of the redex the rule discards.
    Erased,
}

/// Explains why the subterm at `sub` has no occurrence after contracting the
/// redex at `at`. Identifiers already present on `e` are ignored: the term is
/// annotated afresh before reducing.
pub fn classify_disappearance(e: &Expr, at: &Path, sub: &Path) -> Result<Disappearance, Error> {
    let e = annotate(&e.strip_ids());
    let redex = e.at_checked(at)?;
    let kind = redex_kind(redex).ok_or_else(|| Error::NotARedex(at.clone()))?;
    let id = e.at_checked(sub)?.id().expect("annotated");
    let reduct = contract(&e, at)?;
    if !paths_with_id(&reduct, id).is_empty() {
        return Err(Error::SubtermSurvives(sub.clone()));
    }
    let rel = sub
        .strip_prefix(at)
        .ok_or_else(|| Error::SubtermSurvives(sub.clone()))?;
    let rel = rel.as_slice();
    let Some((&first, rest)) = rel.split_first() else {
        return Ok(Disappearance::Consumed);
    };
    use Disappearance::*;
    let class = match kind {
        // Inside the lambda only the lambda itself and free occurrences of
        // its parameter vanish; the argument vanishes when it is unused.
        RedexKind::Beta => match first {
            0 => Consumed,
            _ => Erased,
        },
        RedexKind::DeltaListNil | RedexKind::DeltaListCons => {
            if first == 0 {
                Consumed
            } else {
                Erased
            }
        }
        RedexKind::DeltaTupHit | RedexKind::DeltaTupMiss => {
            if rest.is_empty() {
                Consumed
            } else {
                Erased
            }
        }
        RedexKind::RhoIfTrue | RedexKind::RhoIfFalse => {
            if first == 0 {
                Consumed
            } else {
                Erased
            }
        }
        RedexKind::RhoAnd | RedexKind::RhoOr => {
            if first == 0 {
                Consumed
            } else {
                Erased
            }
        }
        RedexKind::RhoNot | RedexKind::RhoArith | RedexKind::RhoCompare => Consumed,
    };
    Ok(class)
}

/// Identifiers present in `e`.
pub fn identifiers(e: &Expr) -> HashSet<NodeId> {
    let mut out = HashSet::new();
    e.for_each_node(&mut |_, n| {
        if let Some(i) = n.id() {
            out.insert(i);
        }
    });
    out
}
