//! The fuel-bounded two-pass heuristic.
//!
//! Both passes search a tree whose nodes are terms and whose edges are one
//! heuristic step on some operator context. A step that lowers the measure
//! below the last committed term is committed and the fuel is refilled;
//! any other step costs one unit of fuel. The pass follows the leftmost
//! branch that reaches a commit, so it never backtracks past one.

mod contexts;
mod inline;

use std::collections::HashMap;

pub use contexts::{cfg_free_vars, cfg_redexes, op_children, op_contexts};
pub use inline::{contract_lam, inline_var, make_redex, one_step_child, one_step_config, Step};

use crate::alpha::{fingerprint, is_free_in};
use crate::ast::{Expr, ExprKind, Path};
use crate::capabilities::Capabilities;
use crate::measure::{count_ops, measure_of, Measure};
use crate::reduce::ReductionTrace;
use crate::sugar::desugar;

pub const DEFAULT_FUEL: usize = 16;

#[derive(Clone, Debug)]
pub struct HeuristicOutcome {
    pub result: Expr,
    /// From the desugared input to `result`.
    pub trace: ReductionTrace,
    pub fuel_given: usize,
    /// Number of committed steps, each strictly lowering the measure.
    pub progress_resets: usize,
}

type StepFn = fn(&Expr, &Path) -> Option<Step>;

struct Search<'a> {
    caps: &'a dyn Capabilities,
    step: StepFn,
    fuel: usize,
    /// Largest fuel with which a term is known to reach no commit.
    failed: HashMap<u128, usize>,
}

impl Search<'_> {
    /// Steps from `e` to the first commit in depth-first order, if any.
    fn first_commit(&mut self, e: &Expr, fuel: usize, base: Measure) -> Option<Vec<Step>> {
        if fuel == 0 {
            return None;
        }
        let key = fingerprint(e);
        if self.failed.get(&key).is_some_and(|&f| f >= fuel) {
            return None;
        }
        for ctx in op_contexts(e) {
            let Some(step) = (self.step)(e, &ctx) else { continue };
            if measure_of(self.caps, &step.result) < base {
                return Some(vec![step]);
            }
            if let Some(mut rest) = self.first_commit(&step.result, fuel - 1, base) {
                rest.insert(0, step);
                return Some(rest);
            }
        }
        let f = self.failed.entry(key).or_insert(0);
        *f = (*f).max(fuel);
        None
    }

    fn run(&mut self, e: &Expr, trace: &mut ReductionTrace) -> usize {
        let mut cur = e.clone();
        let mut commits = 0;
        loop {
            let base = measure_of(self.caps, &cur);
            let Some(steps) = self.first_commit(&cur, self.fuel, base) else {
                return commits;
            };
            for s in steps {
                cur = s.result.clone();
                trace.record(s.at, s.kind, s.result);
            }
            commits += 1;
        }
    }
}

fn pass(caps: &dyn Capabilities, e: &Expr, fuel: usize, step: StepFn) -> HeuristicOutcome {
    let start = desugar(e);
    let mut trace = ReductionTrace::new(start.clone());
    let commits = Search {
        caps,
        step,
        fuel,
        failed: HashMap::new(),
    }
    .run(&start, &mut trace);
    HeuristicOutcome {
        result: trace.final_term().clone(),
        trace,
        fuel_given: fuel,
        progress_resets: commits,
    }
}

/// First pass: reduce operator configurations.
pub fn pass1(caps: &dyn Capabilities, e: &Expr, fuel: usize) -> HeuristicOutcome {
    pass(caps, e, fuel, one_step_config)
}

/// Second pass: reduce operator children to regroup fragments.
pub fn pass2(caps: &dyn Capabilities, e: &Expr, fuel: usize) -> HeuristicOutcome {
    pass(caps, e, fuel, one_step_child)
}

/// Both passes in sequence, then removal of dead host bindings.
pub fn min_red(caps: &dyn Capabilities, e: &Expr, fuel: usize) -> HeuristicOutcome {
    let mut first = pass1(caps, e, fuel);
    let second = pass2(caps, &first.result, fuel);
    first.trace.extend(second.trace);
    drop_dead_bindings(&mut first.trace);
    HeuristicOutcome {
        result: first.trace.final_term().clone(),
        trace: first.trace,
        fuel_given: fuel,
        progress_resets: first.progress_resets + second.progress_resets,
    }
}

/// Contracts every `(λx. b) d` outside operator configurations where `x`
/// does not occur in `b` and `d` contains no operator. Such a step leaves
/// the measure unchanged.
fn drop_dead_bindings(trace: &mut ReductionTrace) {
    fn find(e: &Expr, path: &mut Path) -> bool {
        if let ExprKind::App(f, d) = e.kind() {
            if let ExprKind::Lam(x, b) = f.kind() {
                if !is_free_in(x, b) && count_ops(d) == 0 {
                    return true;
                }
            }
        }
        let skip = e.as_operator().map_or(0, |op| op.configs().len());
        for (i, c) in e.children().into_iter().enumerate().skip(skip) {
            path.push(i);
            if find(c, path) {
                return true;
            }
            path.pop();
        }
        false
    }
    loop {
        let mut at = Path::root();
        if !find(trace.final_term(), &mut at) {
            break;
        }
        trace.step(&at).expect("dead binding is a beta redex");
    }
}

/// A fuel sufficient for usual programs: `v` variables to inline per
/// configuration, `r` recursive calls of `r2` steps each, and `c` steps to
/// turn a child into an operator.
pub fn fuel_estimate(v: usize, r: usize, r2: usize, c: usize) -> usize {
    (v + r * r2).max(2 * c)
}
