//! Checks shared by the property tests and the acceptance runner. Each one
//! panics with a description of the first violation.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use qir::alpha::free_var_occurrences;
use qir::reduce::{
    annotate, classify_disappearance, contract, normalize, one_step_reducts, redexes, Disappearance, RedexKind,
};
use qir::{
    alpha_eq, desugar, explore_reductions, fingerprint, measure_of, min_red, parse, print, Capabilities,
    ClosedConfigCapabilities, Expr, ExprKind, OpKind, SqlCapabilities,
};

use super::{corpus, omega, reachable, TermGen};

/// Corpus programs in which no reduction erases or duplicates an operator.
pub const FIXED_OPERATORS: [&str; 6] = [
    "example1",
    "example2",
    "example3",
    "example7",
    "analytics_small",
    "join",
];

fn grow(set: &mut HashMap<u128, Expr>, frontier: &mut Vec<Expr>) {
    let mut next = Vec::new();
    for t in frontier.iter() {
        for (_, _, r) in one_step_reducts(t) {
            if set.insert(fingerprint(&r), r.clone()).is_none() {
                next.push(r);
            }
        }
    }
    *frontier = next;
}

/// Whether `a` and `b` reduce to alpha-equal terms in at most `depth` steps
/// each.
pub fn joinable(a: &Expr, b: &Expr, depth: usize) -> bool {
    let mut sa = HashMap::from([(fingerprint(a), a.clone())]);
    let mut sb = HashMap::from([(fingerprint(b), b.clone())]);
    let (mut fa, mut fb) = (vec![a.clone()], vec![b.clone()]);
    for _ in 0..depth {
        if sa.keys().any(|k| sb.contains_key(k)) {
            return true;
        }
        grow(&mut sa, &mut fa);
        grow(&mut sb, &mut fb);
    }
    sa.keys().any(|k| sb.contains_key(k))
}

/// Returns the number of reduct pairs checked.
pub fn local_confluence(terms: u64) -> usize {
    let mut pairs = 0;
    for seed in 0..terms {
        let e = TermGen::new(seed).term(25);
        let reducts = one_step_reducts(&e);
        for (i, (p, _, a)) in reducts.iter().enumerate() {
            for (q, _, b) in &reducts[i + 1..] {
                pairs += 1;
                assert!(
                    joinable(a, b, 10),
                    "seed {seed}: {e}\nreducts at {p:?} and {q:?} do not join"
                );
            }
        }
    }
    pairs
}

/// Returns the number of contractions checked.
pub fn fixed_operator_monotonicity() -> usize {
    let caps = SqlCapabilities;
    let mut checked = 0;
    for name in FIXED_OPERATORS.into_iter().chain(["analytics"]) {
        let start = desugar(&corpus(name));
        for t in reachable(&start, 64, 1500).values() {
            let m = measure_of(&caps, t);
            for (at, kind, r) in one_step_reducts(t) {
                checked += 1;
                assert!(
                    measure_of(&caps, &r) <= m,
                    "{name}: {kind} at {at:?} raises the measure of\n{t}"
                );
            }
        }
    }
    checked
}

/// Runs the heuristic on random terms, a quarter of which contain a
/// divergent subterm. Returns the slowest run.
pub fn heuristic_termination(terms: u64, cap: Duration) -> Duration {
    let caps = SqlCapabilities;
    let mut slowest = Duration::ZERO;
    for seed in 0..terms {
        let mut e = TermGen::new(seed).term(30);
        if seed % 4 == 0 {
            e = match seed % 3 {
                0 => Expr::select(Expr::lam("x", Expr::app(omega(), Expr::var("x"))), e),
                1 => Expr::app(Expr::lam("y", e), omega()),
                _ => Expr::app(omega(), e),
            };
        }
        let fuel = (seed % 17) as usize;
        let started = Instant::now();
        let out = min_red(&caps, &e, fuel);
        let took = started.elapsed();
        assert!(took < cap, "seed {seed} took {took:?}");
        slowest = slowest.max(took);
        assert_eq!(out.trace.replay().unwrap(), out.result, "seed {seed}");
        assert!(measure_of(&caps, &out.result) <= measure_of(&caps, &e), "seed {seed}");
    }
    slowest
}

/// For every fixed-operator corpus program, the least fuel with which the
/// heuristic reaches the exhaustive optimum.
pub fn desk_completeness() -> Vec<(&'static str, usize)> {
    let caps = SqlCapabilities;
    let mut out = Vec::new();
    for name in FIXED_OPERATORS {
        let e = corpus(name);
        let best = explore_reductions(&caps, &e, 100_000);
        assert!(best.exhausted, "{name}");
        let fuel = (0..=64).find(|&f| measure_of(&caps, &min_red(&caps, &e, f).result) == best.best_measure);
        let fuel = fuel.unwrap_or_else(|| panic!("{name}: no fuel up to 64 reaches {}", best.best_measure));
        out.push((name, fuel));

        let normal = normalize(&desugar(&e), 10_000);
        assert!(normal.normal, "{name}");
        assert_eq!(
            measure_of(&caps, &normal.result),
            best.best_measure,
            "{name}: normal form"
        );
    }
    out
}

fn ids(e: &Expr) -> std::collections::HashSet<qir::NodeId> {
    let mut out = std::collections::HashSet::new();
    e.for_each_node(&mut |_, n| out.extend(n.id()));
    out
}

/// Classifies `cases` vanishing subterms and checks each verdict against
/// the shape of the redex. Returns the number of erased ones.
pub fn erased_or_consumed(cases: usize) -> usize {
    let mut seen = 0;
    let mut erased = 0;
    let mut seed = 0;
    while seen < cases {
        let e = annotate(&TermGen::new(seed).term(20));
        seed += 1;
        for (at, kind) in redexes(&e) {
            let reduct = contract(&e, &at).unwrap();
            let alive = ids(&reduct);
            let redex = e.at(&at).unwrap();
            let param = match redex.kind() {
                ExprKind::App(f, _) if kind == RedexKind::Beta => match f.kind() {
                    ExprKind::Lam(x, _) => Some(x.clone()),
                    _ => None,
                },
                _ => None,
            };
            for rel in redex.paths() {
                let sub = at.join(&rel);
                let node = e.at(&sub).unwrap();
                let class = classify_disappearance(&e, &at, &sub);
                if node.id().is_some_and(|id| alive.contains(&id)) {
                    assert!(class.is_err(), "{e}: {sub:?} survives but is classified");
                    continue;
                }
                seen += 1;
                match class.unwrap_or_else(|err| panic!("{e}: {sub:?}: {err}")) {
                    Disappearance::Erased => {
                        erased += 1;
                        assert!(!rel.is_empty(), "{e}: the redex itself is erased");
                        assert!(ids(node).is_disjoint(&alive), "{e}: erased {sub:?} leaves a trace");
                    }
                    Disappearance::Consumed => {
                        let spine = rel.len() <= 1;
                        let occurrence = param.as_ref().is_some_and(|x| node.as_var() == Some(x));
                        assert!(spine || occurrence, "{e}: consumed {sub:?} is not part of the redex");
                    }
                }
            }
        }
    }
    erased
}

pub fn round_trip(terms: u64) {
    for seed in 0..terms {
        let e = TermGen::new(seed).term(30);
        let text = print(&e);
        let back = parse(&text).unwrap_or_else(|err| panic!("seed {seed}: {text}: {err}"));
        assert!(alpha_eq(&back, &e), "seed {seed}: {text}\n{back}");
    }
}

/// Accepts a scan when its configuration mentions free variables at least
/// twice. Inlining can remove such occurrences, so this description is not
/// stable under reduction.
pub struct FreeOccurrenceCapabilities;

impl Capabilities for FreeOccurrenceCapabilities {
    fn supports_operator(&self, kind: OpKind) -> bool {
        kind == OpKind::Scan
    }

    fn supports_config(&self, _: OpKind, configs: &[Expr]) -> bool {
        configs.iter().map(|c| free_var_occurrences(c).len()).sum::<usize>() >= 2
    }
}

/// The program `name` reduces to `name.out`, the unique optimum, but the
/// heuristic misses it for every fuel up to 64.
pub fn heuristic_misses(name: &str, caps: &dyn Capabilities) {
    let e = corpus(name);
    let want = desugar(&corpus(&format!("{name}.out")));
    let best = explore_reductions(caps, &e, 100_000);
    assert!(best.exhausted, "{name}");
    assert_eq!(
        measure_of(caps, &want),
        best.best_measure,
        "{name}: the printed optimum"
    );
    assert!(
        best.best_measure < measure_of(caps, &desugar(&e)),
        "{name}: the input is already optimal"
    );
    for fuel in 0..=64 {
        let got = min_red(caps, &e, fuel).result;
        assert!(!alpha_eq(&got, &want), "{name}: found at fuel {fuel}");
        assert!(
            measure_of(caps, &got) > best.best_measure,
            "{name}: optimal at fuel {fuel}"
        );
    }
}

pub fn counterexamples() {
    heuristic_misses("example7", &FreeOccurrenceCapabilities);
    for name in ["example8", "example9", "example10"] {
        heuristic_misses(name, &ClosedConfigCapabilities);
    }
}

/// `(op − comp)` and `frag` of a corpus program and of its printed reduct.
pub fn measure_pair(name: &str, caps: &dyn Capabilities) -> [(usize, usize); 2] {
    let e = measure_of(caps, &desugar(&corpus(name)));
    let out = measure_of(caps, &desugar(&corpus(&format!("{name}.out"))));
    [e.as_pair(), out.as_pair()]
}
