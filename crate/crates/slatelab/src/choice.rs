//! User-choice models: the conditional choice model used by both the
//! environment and the agents' expectations, and the exponential cascade
//! model used as environment behavior in the robustness experiment.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::user::UserState;
use crate::{Result, SlateError};

/// Unnormalized choice scores for the k slate items plus the null item.
#[derive(Debug, Clone)]
pub struct ChoiceScores {
    /// Per-item scores v(s, i) >= 0, in slate order.
    pub item_scores: Vec<f64>,
    /// Null-item score v(s, null) > 0.
    pub null_score: f64,
}

impl ChoiceScores {
    pub fn new(item_scores: Vec<f64>, null_score: f64) -> Self {
        Self { item_scores, null_score }
    }
}

/// Cascade inspection parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CascadeParams {
    /// Base inspection probability for the first slot.
    pub base_inspect: f64,
    /// Per-position inspection decay.
    pub decay: f64,
}

impl Default for CascadeParams {
    fn default() -> Self {
        Self { base_inspect: 1.0, decay: 0.65 }
    }
}

/// How cascade selection probabilities are composed from per-position terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CascadeMode {
    /// Generative inspect-then-select cascade: the user scans top to bottom
    /// and stops at the first selected item. Always a valid distribution.
    #[default]
    Sequential,
    /// Literal per-position marginals `base * decay^j * p_j`. These need not
    /// sum to <= 1 for arbitrary inputs; kept as an alternative mode.
    Marginal,
}

/// Sentinel index for the no-click outcome (the last entry of a probability
/// vector over a k-item slate).
pub const NULL_CHOICE: usize = usize::MAX;

/// Conditional choice probabilities: P(i) = v_i / (v_null + sum_j v_j).
/// Returns k+1 entries with the null probability last.
pub fn conditional_probs(scores: &ChoiceScores) -> Result<Vec<f64>> {
    if scores.item_scores.iter().any(|v| *v < 0.0) || scores.null_score < 0.0 {
        return Err(SlateError::InvalidParam("choice scores must be nonnegative".into()));
    }
    let total: f64 = scores.null_score + scores.item_scores.iter().sum::<f64>();
    if total <= 0.0 {
        return Err(SlateError::DegenerateChoice);
    }
    let mut probs: Vec<f64> = scores.item_scores.iter().map(|v| v / total).collect();
    probs.push(scores.null_score / total);
    Ok(probs)
}

/// Cascade choice probabilities over the slate, with the null probability
/// last. Base per-position selection probabilities come from the conditional
/// model over the same scores.
pub fn cascade_probs(
    scores: &ChoiceScores,
    params: &CascadeParams,
    mode: CascadeMode,
) -> Result<Vec<f64>> {
    let base = conditional_probs(scores)?;
    let k = scores.item_scores.len();
    let mut probs = Vec::with_capacity(k + 1);
    match mode {
        CascadeMode::Sequential => {
            let mut not_yet = 1.0; // probability the scan reaches this position
            for (j, p) in base[..k].iter().enumerate() {
                let select_here = params.base_inspect * params.decay.powi(j as i32) * p;
                probs.push(not_yet * select_here);
                not_yet *= 1.0 - select_here;
            }
        }
        CascadeMode::Marginal => {
            for (j, p) in base[..k].iter().enumerate() {
                probs.push(params.base_inspect * params.decay.powi(j as i32) * p);
            }
        }
    }
    let clicked: f64 = probs.iter().sum();
    probs.push((1.0 - clicked).max(0.0));
    Ok(probs)
}

/// Categorical draw over a k+1 probability vector. Returns the chosen slate
/// index, or [`NULL_CHOICE`] for the final (no-click) entry.
pub fn sample_choice<R: Rng>(probs: &[f64], rng: &mut R) -> Result<usize> {
    if probs.is_empty() {
        return Err(SlateError::BadDistribution("empty".into()));
    }
    let total: f64 = probs.iter().sum();
    if probs.iter().any(|p| !p.is_finite() || *p < 0.0) || (total - 1.0).abs() > 1e-9 {
        return Err(SlateError::BadDistribution(format!("sum = {total}")));
    }
    let mut u = rng.gen::<f64>() * total;
    for (i, p) in probs.iter().enumerate() {
        u -= p;
        if u <= 0.0 {
            return Ok(if i + 1 == probs.len() { NULL_CHOICE } else { i });
        }
    }
    Ok(NULL_CHOICE)
}

/// The environment's relative-appeal score for a document: interest shifted
/// to [0, 2] so scores are nonnegative.
pub fn environment_score(user: &UserState, doc: &Document) -> f64 {
    1.0 + user.interests[doc.topic]
}
