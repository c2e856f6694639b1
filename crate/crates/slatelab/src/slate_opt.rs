//! Slate optimizers for the fractional item-decomposed objective
//!
//! ```text
//! value(A) = (v_null * q_null + sum_{i in A} v_i * q_i)
//!          / (v_null        + sum_{i in A} v_i)
//! ```
//!
//! over size-k subsets of a candidate set. `exact_slate` solves the problem
//! globally via Dinkelbach parametric search (each subproblem is a top-k over
//! reweighted scores, exact because the feasible set is finite);
//! `brute_force_slate` is the enumeration oracle; `topk_slate` and
//! `greedy_slate` are the heuristics they are compared against.

use serde::{Deserialize, Serialize};

use crate::{Result, SlateError};

/// Enumeration cap for the brute-force oracle.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Per-item pair (choice score v, item long-term value q) consumed by all
/// slate optimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredItem {
    pub id: u64,
    pub v: f64,
    pub q: f64,
}

impl ScoredItem {
    pub fn new(id: u64, v: f64, q: f64) -> Self {
        Self { id, v, q }
    }
}

/// Which optimizer assembles a slate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Optimizer {
    TopK,
    Greedy,
    Exact,
    BruteForce,
}

impl Optimizer {
    pub fn solve(
        self,
        items: &[ScoredItem],
        k: usize,
        null_v: f64,
        null_q: f64,
    ) -> Result<SlateSolution> {
        match self {
            Optimizer::TopK => topk_slate(items, k, null_v, null_q),
            Optimizer::Greedy => greedy_slate(items, k, null_v, null_q),
            Optimizer::Exact => exact_slate(items, k, null_v, null_q),
            Optimizer::BruteForce => brute_force_slate(items, k, null_v, null_q),
        }
    }
}

/// A chosen slate: item ids in serving order plus its expected value.
#[derive(Debug, Clone, PartialEq)]
pub struct SlateSolution {
    pub items: Vec<ScoredItem>,
    pub value: f64,
}

impl SlateSolution {
    pub fn ids(&self) -> Vec<u64> {
        self.items.iter().map(|i| i.id).collect()
    }

    /// Unordered id set, for comparisons against the oracle.
    pub fn id_set(&self) -> Vec<u64> {
        let mut ids = self.ids();
        ids.sort_unstable();
        ids
    }
}

/// Expected value of a chosen slate under the conditional choice model.
pub fn slate_value(chosen: &[ScoredItem], null_v: f64, null_q: f64) -> Result<f64> {
    let denom = null_v + chosen.iter().map(|i| i.v).sum::<f64>();
    if denom <= 0.0 {
        return Err(SlateError::DegenerateChoice);
    }
    let num = null_v * null_q + chosen.iter().map(|i| i.v * i.q).sum::<f64>();
    Ok(num / denom)
}

fn check_size(items: &[ScoredItem], k: usize) -> Result<()> {
    if items.len() < k || k == 0 {
        return Err(SlateError::TooFewItems { need: k.max(1), got: items.len() });
    }
    Ok(())
}

/// Sorts descending by key with ties broken by smaller id.
fn sort_by_key_desc(items: &mut [ScoredItem], key: impl Fn(&ScoredItem) -> f64) {
    items.sort_by(|a, b| {
        key(b).partial_cmp(&key(a)).unwrap_or(std::cmp::Ordering::Equal).then(a.id.cmp(&b.id))
    });
}

/// The k items with the largest product v*q, in descending product order.
pub fn topk_slate(items: &[ScoredItem], k: usize, null_v: f64, null_q: f64) -> Result<SlateSolution> {
    check_size(items, k)?;
    let mut sorted = items.to_vec();
    sort_by_key_desc(&mut sorted, |i| i.v * i.q);
    sorted.truncate(k);
    let value = slate_value(&sorted, null_v, null_q)?;
    Ok(SlateSolution { items: sorted, value })
}

/// Iteratively inserts the item with maximum marginal slate value.
pub fn greedy_slate(
    items: &[ScoredItem],
    k: usize,
    null_v: f64,
    null_q: f64,
) -> Result<SlateSolution> {
    check_size(items, k)?;
    let mut remaining = items.to_vec();
    // Stable candidate order so equal marginal values resolve to smaller id.
    remaining.sort_by_key(|i| i.id);
    let mut chosen: Vec<ScoredItem> = Vec::with_capacity(k);
    for _ in 0..k {
        let mut best: Option<(usize, f64)> = None;
        for (idx, cand) in remaining.iter().enumerate() {
            chosen.push(*cand);
            let value = slate_value(&chosen, null_v, null_q)?;
            chosen.pop();
            if best.map_or(true, |(_, bv)| value > bv) {
                best = Some((idx, value));
            }
        }
        let (idx, _) = best.expect("nonempty candidates");
        chosen.push(remaining.swap_remove(idx));
    }
    let value = slate_value(&chosen, null_v, null_q)?;
    Ok(SlateSolution { items: chosen, value })
}

/// Top-k over reweighted scores v_i * (q_i - lambda): the Dinkelbach
/// subproblem argmax.
fn parametric_argmax(items: &[ScoredItem], k: usize, lambda: f64) -> Vec<ScoredItem> {
    let mut sorted = items.to_vec();
    sort_by_key_desc(&mut sorted, |i| i.v * (i.q - lambda));
    sorted.truncate(k);
    sorted
}

/// Globally optimal size-k slate via Dinkelbach parametric search.
///
/// Iterates lambda <- value(argmax_A sum v_i (q_i - lambda)); lambda is
/// nondecreasing and, over a finite subset lattice, reaches the optimum in
/// finitely many steps.
pub fn exact_slate(
    items: &[ScoredItem],
    k: usize,
    null_v: f64,
    null_q: f64,
) -> Result<SlateSolution> {
    check_size(items, k)?;
    // Any feasible slate gives a valid starting lambda.
    let mut lambda = topk_slate(items, k, null_v, null_q)?.value;
    let mut best = parametric_argmax(items, k, lambda);
    let mut best_value = slate_value(&best, null_v, null_q)?;
    if best_value < lambda {
        // Defensive: keep the feasible start if the first argmax is worse.
        let start = topk_slate(items, k, null_v, null_q)?;
        best = start.items;
        best_value = start.value;
    }
    lambda = best_value;
    for _ in 0..items.len() + 2 {
        let cand = parametric_argmax(items, k, lambda);
        let value = slate_value(&cand, null_v, null_q)?;
        if value > best_value + 1e-15 {
            best = cand;
            best_value = value;
            lambda = value;
        } else {
            break;
        }
    }
    sort_by_key_desc(&mut best, |i| i.v * i.q);
    Ok(SlateSolution { items: best, value: best_value })
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Exhaustive enumeration of all unordered k-subsets; the test oracle.
/// Ties in value resolve to the lexicographically smallest id set.
pub fn brute_force_slate(
    items: &[ScoredItem],
    k: usize,
    null_v: f64,
    null_q: f64,
) -> Result<SlateSolution> {
    check_size(items, k)?;
    if binomial(items.len() as u64, k as u64) > BRUTE_FORCE_LIMIT {
        return Err(SlateError::EnumerationBudget {
            m: items.len(),
            k,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let mut pool = items.to_vec();
    pool.sort_by_key(|i| i.id);
    let mut best: Option<(Vec<ScoredItem>, f64)> = None;
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        let subset: Vec<ScoredItem> = indices.iter().map(|&i| pool[i]).collect();
        let value = slate_value(&subset, null_v, null_q)?;
        // Strict improvement keeps the lexicographically first id set on ties.
        if best.as_ref().map_or(true, |(_, bv)| value > *bv) {
            best = Some((subset, value));
        }
        // Advance to the next combination in lexicographic order.
        let m = pool.len();
        let mut i = k;
        loop {
            if i == 0 {
                let (items, value) = best.expect("at least one subset");
                return Ok(SlateSolution { items, value });
            }
            i -= 1;
            if indices[i] != i + m - k {
                indices[i] += 1;
                for j in i + 1..k {
                    indices[j] = indices[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Number of subsets the brute-force oracle would evaluate.
pub fn enumeration_count(m: usize, k: usize) -> u64 {
    binomial(m as u64, k as u64)
}
