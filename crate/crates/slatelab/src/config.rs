//! Experiment configuration: structured text (TOML) with documented defaults
//! for every key. Unknown keys are rejected to catch typos.

use serde::{Deserialize, Serialize};

use crate::choice::{CascadeMode, CascadeParams};
use crate::corpus::TopicCatalog;
use crate::slate_opt::Optimizer;
use crate::user::{DynamicsParams, NudgeRule};
use crate::{Result, SlateError};

/// Which choice model drives the simulated user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ChoiceModelKind {
    #[default]
    Conditional,
    Cascade,
}

fn d_num_topics() -> usize { 20 }
fn d_num_low_quality() -> usize { 14 }
fn d_quality_stddev() -> f64 { 1.0 }
fn d_doc_length() -> f64 { 4.0 }
fn d_initial_budget() -> f64 { 200.0 }
fn d_no_click_cost() -> f64 { 0.5 }
fn d_bonus_coeff() -> f64 { 0.9 / 3.4 }
fn d_alpha() -> f64 { 1.0 }
fn d_nudge_fraction() -> f64 { 0.3 }
fn d_click_reward() -> f64 { 4.0 }
fn d_cascade_base_inspect() -> f64 { 1.0 }
fn d_cascade_decay() -> f64 { 0.65 }
fn d_null_score() -> f64 { 2.5 }
fn d_num_candidates() -> usize { 10 }
fn d_slate_size() -> usize { 3 }

/// Environment block: catalog, dynamics, choice model and event sizes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnvConfig {
    pub num_topics: usize,
    pub num_low_quality: usize,
    pub quality_stddev: f64,
    pub doc_length: f64,
    pub initial_budget: f64,
    pub no_click_cost: f64,
    pub bonus_coeff: f64,
    pub alpha: f64,
    pub nudge_fraction: f64,
    pub nudge_rule: NudgeRule,
    pub click_reward: f64,
    pub choice_model: ChoiceModelKind,
    pub cascade_base_inspect: f64,
    pub cascade_decay: f64,
    pub cascade_mode: CascadeMode,
    /// Fixed choice score of the null (no-click) item.
    pub null_score: f64,
    /// Candidates drawn per event (m).
    pub num_candidates: usize,
    /// Items per served slate (k).
    pub slate_size: usize,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            num_topics: d_num_topics(),
            num_low_quality: d_num_low_quality(),
            quality_stddev: d_quality_stddev(),
            doc_length: d_doc_length(),
            initial_budget: d_initial_budget(),
            no_click_cost: d_no_click_cost(),
            bonus_coeff: d_bonus_coeff(),
            alpha: d_alpha(),
            nudge_fraction: d_nudge_fraction(),
            nudge_rule: NudgeRule::default(),
            click_reward: d_click_reward(),
            choice_model: ChoiceModelKind::default(),
            cascade_base_inspect: d_cascade_base_inspect(),
            cascade_decay: d_cascade_decay(),
            cascade_mode: CascadeMode::default(),
            null_score: d_null_score(),
            num_candidates: d_num_candidates(),
            slate_size: d_slate_size(),
        }
    }
}

impl EnvConfig {
    pub fn catalog(&self) -> TopicCatalog {
        TopicCatalog::with_topics(
            self.num_topics,
            self.num_low_quality,
            self.quality_stddev,
            self.doc_length,
        )
    }

    pub fn dynamics(&self) -> DynamicsParams {
        DynamicsParams {
            initial_budget: self.initial_budget,
            doc_length: self.doc_length,
            no_click_cost: self.no_click_cost,
            bonus_coeff: self.bonus_coeff,
            alpha: self.alpha,
            nudge_fraction: self.nudge_fraction,
            nudge_rule: self.nudge_rule,
            click_reward: self.click_reward,
        }
    }

    pub fn cascade(&self) -> CascadeParams {
        CascadeParams { base_inspect: self.cascade_base_inspect, decay: self.cascade_decay }
    }
}

/// Agent block: the variant strings to run plus shared learner knobs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AgentBlock {
    /// Variant names, e.g. "RANDOM", "MYOP-TS", "SARSA-GS", "QL-OT-OS", "FSQ".
    pub variants: Vec<String>,
    pub gamma: f64,
    pub epsilon: f64,
}

impl Default for AgentBlock {
    fn default() -> Self {
        Self { variants: vec!["RANDOM".into()], gamma: 1.0, epsilon: 0.1 }
    }
}

/// Q-network hyperparameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QModelConfig {
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub buffer_size: usize,
    /// Label-network refresh interval, in gradient batches.
    pub label_sync_period: usize,
    /// Global L2 gradient-norm clip; guards against runaway growth under
    /// bootstrapped maximization targets.
    pub max_grad_norm: f64,
}

impl Default for QModelConfig {
    fn default() -> Self {
        Self {
            hidden: vec![64, 32],
            learning_rate: 1e-3,
            batch_size: 32,
            buffer_size: 100_000,
            label_sync_period: 100,
            max_grad_norm: 100.0,
        }
    }
}

/// Training/evaluation schedule.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScheduleConfig {
    /// Environment events per training run.
    pub train_steps: usize,
    /// Environment events between periodic evaluations.
    pub eval_every: usize,
    /// Sessions per periodic evaluation.
    pub eval_users: usize,
    /// Sessions for the final reported metrics.
    pub final_eval_users: usize,
    /// Exponential smoothing factor for the training curve.
    pub curve_smoothing: f64,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        Self {
            train_steps: 50_000,
            eval_every: 1000,
            eval_users: 50,
            final_eval_users: 1000,
            curve_smoothing: 0.999,
        }
    }
}

/// Whole experiment: seed + env + agents + qmodel + schedule.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub env: EnvConfig,
    pub agent: AgentBlock,
    pub qmodel: QModelConfig,
    pub schedule: ScheduleConfig,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| SlateError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let e = &self.env;
        if e.slate_size > e.num_candidates {
            return Err(SlateError::Config(format!(
                "slate_size {} exceeds num_candidates {}",
                e.slate_size, e.num_candidates
            )));
        }
        if e.slate_size == 0 {
            return Err(SlateError::Config("slate_size must be >= 1".into()));
        }
        if e.num_low_quality < 2 || e.num_topics < e.num_low_quality + 2 {
            return Err(SlateError::Config("need >= 2 topics per quality band".into()));
        }
        if !(0.0..=1.0).contains(&self.agent.gamma) {
            return Err(SlateError::Config("gamma must be in [0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.agent.epsilon) {
            return Err(SlateError::Config("epsilon must be in [0, 1]".into()));
        }
        if e.bonus_coeff * e.doc_length * 3.4 >= e.doc_length {
            return Err(SlateError::Config("bonus must stay below the document length".into()));
        }
        for v in &self.agent.variants {
            crate::agents::AgentConfig::parse(v, self.agent.gamma, self.agent.epsilon)?;
        }
        Ok(())
    }

    /// Stable 64-bit hash of the canonical serialized config, recorded in
    /// every output file for exact replay.
    pub fn hash(&self) -> u64 {
        // FNV-1a over the canonical TOML text.
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.to_toml().bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        h
    }
}

/// Maps the variant-string optimizer letters to optimizers.
pub fn optimizer_from_letter(c: char) -> Result<Optimizer> {
    match c {
        'T' => Ok(Optimizer::TopK),
        'G' => Ok(Optimizer::Greedy),
        'O' => Ok(Optimizer::Exact),
        _ => Err(SlateError::Config(format!("unknown optimizer letter '{c}'"))),
    }
}
