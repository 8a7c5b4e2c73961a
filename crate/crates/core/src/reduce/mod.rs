//! Substitution, the reduction rules, normal-order reduction, traces and
//! occurrence tracking.

pub mod annotate;
pub mod normal;
pub mod rules;
pub mod subst;
pub mod trace;

pub use annotate::{annotate, classify_disappearance, occurrences_of, Disappearance};
pub use normal::{leftmost_outermost, normal_order_step, normalize, Normalized};
pub use rules::{contract, one_step_reducts, redex_kind, redexes, RedexKind};
pub use subst::{fresh_name, substitute};
pub use trace::ReductionTrace;
