//! Compatible operators, fragments and the measure `(Op − Comp, Frag)`.

use std::cmp::Ordering;
use std::fmt;

use crate::ast::{Expr, ExprKind, OperatorNode, Path};
use crate::capabilities::Capabilities;
use crate::error::Error;

/// The measure of a term, compared lexicographically: first the number of
/// incompatible operators, then the number of fragments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Measure {
    pub op_minus_comp: usize,
    pub frag: usize,
}

impl Measure {
    pub fn new(op_minus_comp: usize, frag: usize) -> Self {
        Measure { op_minus_comp, frag }
    }

    pub fn as_pair(self) -> (usize, usize) {
        (self.op_minus_comp, self.frag)
    }

    pub fn strictly_below(self, other: Measure) -> bool {
        self.cmp(&other) == Ordering::Less
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.op_minus_comp, self.frag)
    }
}

/// Supported, with supported configurations. Children are irrelevant.
pub fn operator_compatible(caps: &dyn Capabilities, op: &OperatorNode) -> bool {
    caps.supports_operator(op.kind()) && caps.supports_config(op.kind(), op.configs())
}

/// Whether the operator at `at` is compatible.
pub fn is_compatible(caps: &dyn Capabilities, e: &Expr, at: &Path) -> Result<bool, Error> {
    let op = e
        .at_checked(at)?
        .as_operator()
        .ok_or_else(|| Error::NotAnOperator(at.clone()))?;
    Ok(operator_compatible(caps, op))
}

struct Census {
    ops: usize,
    compatible: usize,
    fragments: Vec<Path>,
}

/// One walk computing operator counts and fragment roots. A compatible
/// operator starts a fragment unless it sits in a child slot of another
/// compatible operator. Operators below a configuration never start one.
fn census(caps: &dyn Capabilities, e: &Expr) -> Census {
    fn go(caps: &dyn Capabilities, e: &Expr, path: &mut Path, joined: bool, in_config: bool, out: &mut Census) {
        let compat = match e.kind() {
            ExprKind::Operator(op) => {
                let c = operator_compatible(caps, op);
                out.ops += 1;
                if c {
                    out.compatible += 1;
                    if !joined && !in_config {
                        out.fragments.push(path.clone());
                    }
                }
                Some((c, op.configs().len()))
            }
            _ => None,
        };
        for (i, c) in e.children().into_iter().enumerate() {
            let (child_joined, child_in_config) = match compat {
                Some((_, n)) if i < n => (false, true),
                Some((compat, _)) => (compat, in_config),
                None => (false, in_config),
            };
            path.push(i);
            go(caps, c, path, child_joined, child_in_config, out);
            path.pop();
        }
    }
    let mut out = Census {
        ops: 0,
        compatible: 0,
        fragments: Vec::new(),
    };
    go(caps, e, &mut Path::root(), false, false, &mut out);
    out
}

/// Number of operator nodes anywhere in `e`, configurations included.
pub fn count_ops(e: &Expr) -> usize {
    let mut n = 0;
    e.for_each_node(&mut |_, x| n += x.is_operator() as usize);
    n
}

pub fn count_compatible(caps: &dyn Capabilities, e: &Expr) -> usize {
    census(caps, e).compatible
}

/// Roots of the fragments of `e`, depth-first left-to-right.
pub fn fragments(caps: &dyn Capabilities, e: &Expr) -> Vec<Path> {
    census(caps, e).fragments
}

pub fn measure_of(caps: &dyn Capabilities, e: &Expr) -> Measure {
    let c = census(caps, e);
    Measure::new(c.ops - c.compatible, c.fragments.len())
}
