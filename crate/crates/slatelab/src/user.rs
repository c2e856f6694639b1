//! User state and the interest / satisfaction / budget dynamics.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::{Result, SlateError};

/// How the interest-nudge magnitude is computed from the current interest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum NudgeRule {
    /// |delta| = y * (1 - |I_t|): neutral interests move the most.
    #[default]
    Damped,
    /// |delta| = |(-y*|I_t| + y) * (-I_t)| = y * (1 - |I_t|) * |I_t|.
    Literal,
}

/// Session dynamics parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DynamicsParams {
    pub initial_budget: f64,
    pub doc_length: f64,
    pub no_click_cost: f64,
    /// Budget bonus per click is `bonus_coeff * doc_length * satisfaction`.
    pub bonus_coeff: f64,
    /// Satisfaction mix: S = (1 - alpha) * interest + alpha * quality.
    pub alpha: f64,
    /// Interest-nudge fraction y.
    pub nudge_fraction: f64,
    pub nudge_rule: NudgeRule,
    /// Reward credited for a clicked document.
    pub click_reward: f64,
}

impl Default for DynamicsParams {
    fn default() -> Self {
        Self {
            initial_budget: 200.0,
            doc_length: 4.0,
            no_click_cost: 0.5,
            bonus_coeff: 0.9 / 3.4,
            alpha: 1.0,
            nudge_fraction: 0.3,
            nudge_rule: NudgeRule::Damped,
            click_reward: 4.0,
        }
    }
}

/// Interest vector, remaining time budget and session-alive flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserState {
    /// Per-topic interests in [-1, 1].
    pub interests: Vec<f64>,
    pub budget: f64,
    pub alive: bool,
}

impl UserState {
    /// Builds a user with fixed interests, mostly for tests and hand-built MDPs.
    pub fn with_interests(interests: Vec<f64>, budget: f64) -> Self {
        Self { interests, alive: budget > 0.0, budget }
    }
}

/// Samples a fresh user: interests i.i.d. Uniform[-1, 1], full budget.
pub fn sample_user<R: Rng>(num_topics: usize, params: &DynamicsParams, rng: &mut R) -> UserState {
    let interests = (0..num_topics).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    UserState { interests, budget: params.initial_budget, alive: true }
}

/// User interest in a document: dot product with the one-hot topic vector.
pub fn interest(user: &UserState, doc: &Document) -> f64 {
    user.interests[doc.topic]
}

/// Satisfaction S(u, d) = (1 - alpha) * I(u, d) + alpha * L_d.
pub fn satisfaction(user: &UserState, doc: &Document, params: &DynamicsParams) -> f64 {
    (1.0 - params.alpha) * interest(user, doc) + params.alpha * doc.quality
}

/// Nudge magnitude for the configured rule.
fn nudge_magnitude(rule: NudgeRule, y: f64, i_t: f64) -> f64 {
    match rule {
        NudgeRule::Damped => y * (1.0 - i_t.abs()),
        NudgeRule::Literal => ((-y * i_t.abs() + y) * -i_t).abs(),
    }
}

/// Applies a click on `doc`: charges the budget (length less the satisfaction
/// bonus), nudges the clicked topic's interest, and returns the reward.
pub fn apply_click<R: Rng>(
    user: &mut UserState,
    doc: &Document,
    params: &DynamicsParams,
    rng: &mut R,
) -> Result<f64> {
    if !user.alive {
        return Err(SlateError::TerminatedUser);
    }
    let s = satisfaction(user, doc, params);
    let bonus = params.bonus_coeff * doc.length * s;
    user.budget -= doc.length - bonus;

    let i_t = user.interests[doc.topic];
    let delta = nudge_magnitude(params.nudge_rule, params.nudge_fraction, i_t);
    let positive = rng.gen::<f64>() < (i_t + 1.0) / 2.0;
    let nudged = if positive { i_t + delta } else { i_t - delta };
    user.interests[doc.topic] = nudged.clamp(-1.0, 1.0);

    user.alive = user.budget > 0.0;
    Ok(params.click_reward)
}

/// Advances a no-click event: charges the fixed no-click cost only.
pub fn apply_no_click(user: &mut UserState, params: &DynamicsParams) -> Result<()> {
    if !user.alive {
        return Err(SlateError::TerminatedUser);
    }
    user.budget -= params.no_click_cost;
    user.alive = user.budget > 0.0;
    Ok(())
}
