//! Variables, alpha-equivalence and alpha-invariant fingerprints.

use std::collections::HashSet;
use std::hash::{Hash, Hasher};

use xxhash_rust::xxh3::Xxh3;

use crate::ast::{Expr, ExprKind, Name, Path, Sugar, Value};
use crate::sugar::desugar;

/// Names bound by `e` in its child at `index`.
fn binder_for_child(e: &Expr, index: usize) -> Option<&Name> {
    match e.kind() {
        ExprKind::Lam(x, _) => Some(x),
        ExprKind::Sugar(s) => match &**s {
            Sugar::Let(x, _, _) if index == 1 => Some(x),
            Sugar::LetRec(x, _, _) => Some(x),
            _ => None,
        },
        _ => None,
    }
}

/// Free variables of `e`, ordered by first depth-first left-to-right
/// occurrence.
pub fn free_vars(e: &Expr) -> Vec<Name> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (_, name) in free_var_occurrences(e) {
        if seen.insert(name.clone()) {
            out.push(name);
        }
    }
    out
}

/// Every free occurrence of a variable in `e`, with its path relative to `e`,
/// in depth-first left-to-right order.
pub fn free_var_occurrences(e: &Expr) -> Vec<(Path, Name)> {
    fn go(e: &Expr, bound: &mut Vec<Name>, path: &mut Path, out: &mut Vec<(Path, Name)>) {
        if let ExprKind::Var(x) = e.kind() {
            if !bound.contains(x) {
                out.push((path.clone(), x.clone()));
            }
            return;
        }
        for (i, c) in e.children().into_iter().enumerate() {
            let binder = binder_for_child(e, i);
            if let Some(b) = binder {
                bound.push(b.clone());
            }
            path.push(i);
            go(c, bound, path, out);
            path.pop();
            if binder.is_some() {
                bound.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(e, &mut Vec::new(), &mut Path::root(), &mut out);
    out
}

pub fn is_free_in(name: &str, e: &Expr) -> bool {
    match e.kind() {
        ExprKind::Var(x) => &**x == name,
        _ => e
            .children()
            .into_iter()
            .enumerate()
            .any(|(i, c)| binder_for_child(e, i).is_none_or(|b| &**b != name) && is_free_in(name, c)),
    }
}

/// Path of the lambda binding the variable occurrence at `var_path`, or
/// `None` when the occurrence is free in `root`.
pub fn binder_of(root: &Expr, var_path: &Path) -> Option<Path> {
    let name = root.at(var_path)?.as_var()?.clone();
    let steps = var_path.as_slice();
    let mut nodes = Vec::with_capacity(steps.len());
    let mut cur = root;
    for &i in steps {
        nodes.push(cur);
        cur = cur.child(i)?;
    }
    for depth in (0..steps.len()).rev() {
        if let Some(b) = binder_for_child(nodes[depth], steps[depth]) {
            if *b == name {
                return Some(Path::new(steps[..depth].to_vec()));
            }
        }
    }
    None
}

/// Equality up to consistent renaming of bound variables. Identifiers are
/// ignored and sugar is compared through its expansion.
pub fn alpha_eq(a: &Expr, b: &Expr) -> bool {
    if a.contains_sugar() || b.contains_sugar() {
        return alpha_eq_core(&desugar(a), &desugar(b), &mut Vec::new(), &mut Vec::new());
    }
    alpha_eq_core(a, b, &mut Vec::new(), &mut Vec::new())
}

fn lookup(env: &[Name], x: &Name) -> Option<usize> {
    env.iter().rev().position(|y| y == x)
}

fn alpha_eq_core(a: &Expr, b: &Expr, env_a: &mut Vec<Name>, env_b: &mut Vec<Name>) -> bool {
    use ExprKind::*;
    match (a.kind(), b.kind()) {
        (Var(x), Var(y)) => match (lookup(env_a, x), lookup(env_b, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Lam(x, ba), Lam(y, bb)) => {
            env_a.push(x.clone());
            env_b.push(y.clone());
            let r = alpha_eq_core(ba, bb, env_a, env_b);
            env_a.pop();
            env_b.pop();
            r
        }
        (Const(x), Const(y)) => x.identical(y),
        (TupCons(l, ..), TupCons(l2, ..)) | (TupDestr(_, l), TupDestr(_, l2)) if l != l2 => false,
        (ValueFun(k, _), ValueFun(k2, _)) if k != k2 => false,
        (Builtin(k, _), Builtin(k2, _)) if k != k2 => false,
        (DataRef(x), DataRef(y)) => x == y,
        (TruffleRef(x), TruffleRef(y)) => x == y,
        (Operator(o), Operator(o2)) if o.kind() != o2.kind() => false,
        (ka, kb) if std::mem::discriminant(ka) == std::mem::discriminant(kb) => {
            let ca = a.children();
            let cb = b.children();
            ca.len() == cb.len() && ca.into_iter().zip(cb).all(|(x, y)| alpha_eq_core(x, y, env_a, env_b))
        }
        _ => false,
    }
}

/// A 128-bit alpha-invariant fingerprint: alpha-equivalent terms always share
/// it, distinct classes collide with negligible probability.
pub fn fingerprint(e: &Expr) -> u128 {
    let owned;
    let e = if e.contains_sugar() {
        owned = desugar(e);
        &owned
    } else {
        e
    };
    let mut h = CanonHasher::new();
    hash_canonical(e, &mut Vec::new(), &mut h);
    h.finish128()
}

struct CanonHasher(Xxh3);

impl CanonHasher {
    fn new() -> Self {
        CanonHasher(Xxh3::new())
    }

    fn finish128(&self) -> u128 {
        self.0.digest128()
    }
}

impl Hasher for CanonHasher {
    fn finish(&self) -> u64 {
        self.0.digest()
    }

    fn write(&mut self, bytes: &[u8]) {
        self.0.update(bytes);
    }
}

fn hash_canonical(e: &Expr, env: &mut Vec<Name>, h: &mut CanonHasher) {
    use ExprKind::*;
    std::mem::discriminant(e.kind()).hash(h);
    match e.kind() {
        Var(x) => match lookup(env, x) {
            Some(i) => {
                0u8.hash(h);
                i.hash(h);
            }
            None => {
                1u8.hash(h);
                x.hash(h);
            }
        },
        Lam(x, b) => {
            env.push(x.clone());
            hash_canonical(b, env, h);
            env.pop();
            return;
        }
        Const(v) => match v {
            Value::Number(n) => (0u8, n.to_bits()).hash(h),
            Value::String(s) => (1u8, s).hash(h),
            Value::Bool(b) => (2u8, b).hash(h),
        },
        TupCons(l, ..) | TupDestr(_, l) | DataRef(l) => l.hash(h),
        ValueFun(k, _) => k.hash(h),
        Builtin(k, _) => k.hash(h),
        TruffleRef(id) => id.hash(h),
        Operator(op) => op.kind().hash(h),
        _ => {}
    }
    for c in e.children() {
        hash_canonical(c, env, h);
    }
}
