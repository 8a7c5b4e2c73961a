//! Breadth-first exploration of every reduct of a term.

use std::collections::HashSet;

use crate::alpha::fingerprint;
use crate::ast::{Expr, Path};
use crate::capabilities::Capabilities;
use crate::measure::{measure_of, Measure};
use crate::reduce::{one_step_reducts, RedexKind, ReductionTrace};
use crate::sugar::desugar;

pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug)]
pub struct ExploreResult {
    pub best: Expr,
    pub best_measure: Measure,
    /// From the desugared input to `best`.
    pub best_trace: ReductionTrace,
    /// Distinct terms (up to alpha-equivalence) discovered, the input included.
    pub explored_count: usize,
    /// Every reduct was enumerated within the budget.
    pub exhausted: bool,
}

struct Node {
    term: Expr,
    parent: Option<(usize, Path, RedexKind)>,
}

/// Explores the reduction graph of `e` level by level, keeping the first
/// discovered term of least measure. Stops when no new term is reachable or
/// when `budget` distinct terms have been discovered.
pub fn explore_reductions(caps: &dyn Capabilities, e: &Expr, budget: usize) -> ExploreResult {
    let budget = budget.max(1);
    let start = desugar(e);
    let mut seen: HashSet<u128> = HashSet::from([fingerprint(&start)]);
    let mut nodes = vec![Node {
        term: start.clone(),
        parent: None,
    }];
    let mut best = 0;
    let mut best_measure = measure_of(caps, &start);
    let mut next = 0;
    let mut exhausted = true;

    'bfs: while next < nodes.len() {
        let current = next;
        next += 1;
        for (path, kind, reduct) in one_step_reducts(&nodes[current].term) {
            if !seen.insert(fingerprint(&reduct)) {
                continue;
            }
            if nodes.len() >= budget {
                exhausted = false;
                break 'bfs;
            }
            let m = measure_of(caps, &reduct);
            if m < best_measure {
                best_measure = m;
                best = nodes.len();
            }
            nodes.push(Node {
                term: reduct,
                parent: Some((current, path, kind)),
            });
        }
    }

    let mut chain = Vec::new();
    let mut at = best;
    while let Some((parent, path, kind)) = &nodes[at].parent {
        chain.push((at, path.clone(), *kind));
        at = *parent;
    }
    let mut trace = ReductionTrace::new(start);
    for (i, path, kind) in chain.into_iter().rev() {
        trace.record(path, kind, nodes[i].term.clone());
    }

    ExploreResult {
        best: nodes[best].term.clone(),
        best_measure,
        best_trace: trace,
        explored_count: nodes.len(),
        exhausted,
    }
}
