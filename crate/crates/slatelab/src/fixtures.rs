//! Hand-built optimizer instances on which the top-k and greedy heuristics
//! provably misbehave. Used as test fixtures and by the `fixtures` CLI
//! subcommand.

use crate::slate_opt::ScoredItem;

/// A small optimizer instance with its slate size and null-item parameters.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub items: Vec<ScoredItem>,
    pub k: usize,
    pub null_v: f64,
    pub null_q: f64,
}

/// In the unbounded-ratio instance the two products v*q tie exactly; item b
/// carries the smaller id so deterministic tie-breaking selects it, which is
/// the arbitrarily-bad outcome the instance demonstrates.
pub const UNBOUNDED_B_ID: u64 = 0;
pub const UNBOUNDED_A_ID: u64 = 1;

/// k=2 instance where both heuristics seed the slate with the high-product
/// item `a` and end at value 2.6/4, while the optimum {b1, b2} is worth 2/3.
pub fn heuristic_counterexample() -> Fixture {
    Fixture {
        name: "heuristic_counterexample",
        items: vec![
            ScoredItem::new(0, 2.0, 0.8), // a
            ScoredItem::new(1, 1.0, 1.0), // b1
            ScoredItem::new(2, 1.0, 1.0), // b2
        ],
        k: 2,
        null_v: 1.0,
        null_q: 0.0,
    }
}

/// k=1 instance where top-k picks b (value eps/(1+eps)) while the optimum is
/// {a} at value 1/2, so the approximation ratio is unbounded as eps -> 0.
pub fn unbounded_ratio(eps: f64) -> Fixture {
    Fixture {
        name: "unbounded_ratio",
        items: vec![
            ScoredItem::new(UNBOUNDED_B_ID, 1.0, eps),
            ScoredItem::new(UNBOUNDED_A_ID, eps, 1.0),
        ],
        k: 1,
        null_v: eps,
        null_q: 0.0,
    }
}

/// Instance whose set function violates submodularity: the marginal gain of
/// adding `b` grows with the base set. Needs a nonzero null Q-value.
pub fn submodularity_violation(eps: f64) -> Fixture {
    Fixture {
        name: "submodularity_violation",
        items: vec![
            ScoredItem::new(0, 1.0, 10.0), // a
            ScoredItem::new(1, 2.0, eps),  // b
        ],
        k: 2,
        null_v: 1.0,
        null_q: 10.0,
    }
}
