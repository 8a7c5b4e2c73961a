use super::rules::{contract, redex_kind, RedexKind};
use crate::ast::{Expr, Path};
use crate::error::Error;

/// A reduction sequence: the initial term, the contracted redexes in order,
/// and the resulting term.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionTrace {
    initial: Expr,
    steps: Vec<(Path, RedexKind)>,
    final_term: Expr,
}

impl ReductionTrace {
    pub fn new(initial: Expr) -> Self {
        ReductionTrace {
            final_term: initial.clone(),
            initial,
            steps: Vec::new(),
        }
    }

    pub fn initial(&self) -> &Expr {
        &self.initial
    }

    pub fn steps(&self) -> &[(Path, RedexKind)] {
        &self.steps
    }

    pub fn final_term(&self) -> &Expr {
        &self.final_term
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Contracts the redex at `at` in the current final term.
    pub fn step(&mut self, at: &Path) -> Result<&Expr, Error> {
        let node = self.final_term.at_checked(at)?;
        let kind = redex_kind(node).ok_or_else(|| Error::NotARedex(at.clone()))?;
        self.final_term = contract(&self.final_term, at)?;
        self.steps.push((at.clone(), kind));
        Ok(&self.final_term)
    }

    /// Records a step computed elsewhere; `result` must be the contraction
    /// of the current final term at `at`.
    pub fn record(&mut self, at: Path, kind: RedexKind, result: Expr) {
        self.steps.push((at, kind));
        self.final_term = result;
    }

    /// Appends the steps of `next`, which must start where `self` ends.
    pub fn extend(&mut self, next: ReductionTrace) {
        self.steps.extend(next.steps);
        self.final_term = next.final_term;
    }

    /// Replays the steps from the initial term.
    pub fn replay(&self) -> Result<Expr, Error> {
        let mut cur = self.initial.clone();
        for (index, (p, k)) in self.steps.iter().enumerate() {
            let invalid = |reason: String| Error::InvalidTrace { index, reason };
            let node = cur.at(p).ok_or_else(|| invalid(format!("no subterm at {p}")))?;
            match redex_kind(node) {
                Some(found) if found == *k => {}
                Some(found) => return Err(invalid(format!("expected {k} at {p}, found {found}"))),
                None => return Err(invalid(format!("no redex at {p}"))),
            }
            cur = contract(&cur, p).map_err(|e| invalid(e.to_string()))?;
        }
        Ok(cur)
    }

    /// Checks that replaying yields the recorded final term exactly.
    pub fn verify(&self) -> Result<(), Error> {
        let replayed = self.replay()?;
        if replayed == self.final_term {
            Ok(())
        } else {
            Err(Error::InvalidTrace {
                index: self.steps.len(),
                reason: "replay does not reach the recorded final term".to_string(),
            })
        }
    }
}
