//! Policies and TD learners over the simulated environment: Random, myopic,
//! SARSA and Q-learning agents on the item-decomposed Q-function, and the
//! atomic-slate Q-learning baseline, plus the training loop and evaluation.

use std::collections::VecDeque;
use std::time::Instant;

use rand::seq::index::sample as index_sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::choice::{
    cascade_probs, conditional_probs, environment_score, sample_choice, CascadeParams,
    ChoiceScores, NULL_CHOICE,
};
use crate::config::{optimizer_from_letter, ChoiceModelKind, EnvConfig, QModelConfig, ScheduleConfig};
use crate::corpus::{CorpusSampler, Document};
use crate::qmodel::{featurize, featurize_slate, LabelNetwork, QNetwork};
use crate::slate_opt::{enumeration_count, Optimizer, ScoredItem};
use crate::user::{apply_click, apply_no_click, sample_user, UserState};
use crate::{Result, SlateError};

/// Policy families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentKind {
    Random,
    Myopic,
    Sarsa,
    QLearning,
    Fsq,
}

/// Parsed agent variant: family plus training/serving optimizers.
#[derive(Debug, Clone)]
pub struct AgentConfig {
    pub name: String,
    pub kind: AgentKind,
    /// Optimizer used for training-time maximization (Q-learning only).
    pub train_opt: Optimizer,
    /// Optimizer used at serving time.
    pub serve_opt: Optimizer,
    pub gamma: f64,
    pub epsilon: f64,
}

impl AgentConfig {
    /// Parses a variant string: "RANDOM", "FSQ", "MYOP-{TS,GS,OS}",
    /// "SARSA-{TS,GS,OS}", "QL-{TT,GT,OT}-{TS,GS,OS}".
    pub fn parse(variant: &str, gamma: f64, epsilon: f64) -> Result<Self> {
        let bad = || SlateError::Config(format!("unknown agent variant '{variant}'"));
        let serve_suffix = |s: &str| -> Result<Optimizer> {
            let mut chars = s.chars();
            let letter = chars.next().ok_or_else(bad)?;
            if chars.as_str() != "S" {
                return Err(bad());
            }
            optimizer_from_letter(letter)
        };
        let (kind, train_opt, serve_opt, gamma) = match variant {
            "RANDOM" => (AgentKind::Random, Optimizer::TopK, Optimizer::TopK, gamma),
            "FSQ" => (AgentKind::Fsq, Optimizer::BruteForce, Optimizer::BruteForce, gamma),
            v if v.starts_with("MYOP-") => {
                // A myopic model is a Q-learned model with gamma = 0.
                (AgentKind::Myopic, Optimizer::TopK, serve_suffix(&v[5..])?, 0.0)
            }
            v if v.starts_with("SARSA-") => {
                (AgentKind::Sarsa, Optimizer::TopK, serve_suffix(&v[6..])?, gamma)
            }
            v if v.starts_with("QL-") => {
                let rest = &v[3..];
                let (t, s) = rest.split_once('-').ok_or_else(bad)?;
                let mut tc = t.chars();
                let letter = tc.next().ok_or_else(bad)?;
                if tc.as_str() != "T" {
                    return Err(bad());
                }
                (AgentKind::QLearning, optimizer_from_letter(letter)?, serve_suffix(s)?, gamma)
            }
            _ => return Err(bad()),
        };
        Ok(Self { name: variant.to_string(), kind, train_opt, serve_opt, gamma, epsilon })
    }

    pub fn trains(&self) -> bool {
        self.kind != AgentKind::Random
    }
}

/// Compact per-document features carried in logged transitions.
#[derive(Debug, Clone, Copy)]
pub struct DocFeat {
    pub topic: usize,
    pub quality: f64,
}

impl DocFeat {
    fn of(doc: &Document) -> Self {
        Self { topic: doc.topic, quality: doc.quality }
    }

    fn as_document(&self, length: f64) -> Document {
        Document { id: 0, topic: self.topic, quality: self.quality, length }
    }
}

/// One logged clicked interaction, with the successor-event context needed
/// for TD targets.
#[derive(Debug, Clone)]
pub struct Transition {
    /// User interests at the state where the slate was served.
    pub interests: Vec<f64>,
    /// Documents on the served slate, in serving order.
    pub slate_docs: Vec<DocFeat>,
    /// Index of the clicked item within `slate_docs`.
    pub clicked: usize,
    pub reward: f64,
    pub terminal: bool,
    /// User interests at the successor event.
    pub next_interests: Vec<f64>,
    /// Candidate documents drawn at the successor event.
    pub next_docs: Vec<DocFeat>,
    /// Slate served at the successor event (indices into `next_docs`).
    pub next_slate: Vec<usize>,
}

/// The simulated environment: corpus, user dynamics and the true choice model.
pub struct Environment {
    pub config: EnvConfig,
    sampler: CorpusSampler,
}

impl Environment {
    pub fn new(config: EnvConfig) -> Self {
        let sampler = CorpusSampler::new(config.catalog());
        Self { config, sampler }
    }

    pub fn sample_candidates<R: Rng>(&mut self, rng: &mut R) -> Vec<Document> {
        self.sampler.sample_candidates(self.config.num_candidates, rng)
    }

    /// True choice probabilities over a served slate (k+1 entries, null last).
    pub fn choice_probs(&self, user: &UserState, slate: &[&Document]) -> Result<Vec<f64>> {
        let scores = ChoiceScores::new(
            slate.iter().map(|d| environment_score(user, d)).collect(),
            self.config.null_score,
        );
        match self.config.choice_model {
            ChoiceModelKind::Conditional => conditional_probs(&scores),
            ChoiceModelKind::Cascade => {
                let params: CascadeParams = self.config.cascade();
                cascade_probs(&scores, &params, self.config.cascade_mode)
            }
        }
    }
}

/// A policy with its (optional) learned Q-network.
pub struct Agent {
    pub config: AgentConfig,
    pub net: Option<QNetwork>,
    label: Option<LabelNetwork>,
    num_topics: usize,
    slate_size: usize,
    null_score: f64,
}

impl Agent {
    pub fn new(config: AgentConfig, env: &EnvConfig, rng: &mut ChaCha8Rng) -> Self {
        let t = env.num_topics;
        let net = match config.kind {
            AgentKind::Random => None,
            AgentKind::Fsq => {
                Some(QNetwork::new(t + env.slate_size * (t + 1), &[64, 32], rng))
            }
            _ => Some(QNetwork::new(2 * t + 1, &[64, 32], rng)),
        };
        let label = net.as_ref().map(QNetwork::sync_label_network);
        Self {
            config,
            net,
            label,
            num_topics: t,
            slate_size: env.slate_size,
            null_score: env.null_score,
        }
    }

    /// Rebuilds an agent around a restored checkpoint network.
    pub fn with_network(config: AgentConfig, env: &EnvConfig, net: QNetwork) -> Self {
        let label = net.sync_label_network();
        Self {
            config,
            net: Some(net),
            label: Some(label),
            num_topics: env.num_topics,
            slate_size: env.slate_size,
            null_score: env.null_score,
        }
    }

    pub fn with_hidden(
        config: AgentConfig,
        env: &EnvConfig,
        hidden: &[usize],
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let t = env.num_topics;
        let input = match config.kind {
            AgentKind::Fsq => t + env.slate_size * (t + 1),
            _ => 2 * t + 1,
        };
        let net = match config.kind {
            AgentKind::Random => None,
            _ => Some(QNetwork::new(input, hidden, rng)),
        };
        let label = net.as_ref().map(QNetwork::sync_label_network);
        Self {
            config,
            net,
            label,
            num_topics: t,
            slate_size: env.slate_size,
            null_score: env.null_score,
        }
    }

    fn predict_item(&self, interests: &[f64], doc: &Document) -> f64 {
        let user = UserState { interests: interests.to_vec(), budget: 1.0, alive: true };
        self.net
            .as_ref()
            .expect("scoring agent has a network")
            .predict(&featurize(&user, doc))
            .expect("consistent feature dims")
    }

    /// Serves an ordered slate of candidate indices. With `explore`, an
    /// epsilon fraction of slates is a uniformly random k-subset. Returns the
    /// indices and whether this serve was exploratory.
    pub fn serve<R: Rng>(
        &self,
        user: &UserState,
        candidates: &[Document],
        explore: bool,
        rng: &mut R,
    ) -> Result<(Vec<usize>, bool)> {
        let k = self.slate_size;
        if candidates.len() < k {
            return Err(SlateError::TooFewItems { need: k, got: candidates.len() });
        }
        let random_slate = |rng: &mut R| index_sample(rng, candidates.len(), k).into_vec();
        if self.config.kind == AgentKind::Random {
            return Ok((random_slate(rng), false));
        }
        if explore && rng.gen::<f64>() < self.config.epsilon {
            return Ok((random_slate(rng), true));
        }
        match self.config.kind {
            AgentKind::Fsq => {
                let net = self.net.as_ref().expect("fsq network");
                let mut best: Option<(Vec<usize>, f64)> = None;
                for_each_combination(candidates.len(), k, |combo| {
                    let docs: Vec<&Document> = combo.iter().map(|&i| &candidates[i]).collect();
                    let q = net
                        .predict(&featurize_slate(user, &docs))
                        .expect("consistent slate feature dims");
                    if best.as_ref().map_or(true, |(_, bq)| q > *bq) {
                        best = Some((combo.to_vec(), q));
                    }
                });
                Ok((best.expect("at least one slate").0, false))
            }
            _ => {
                let items: Vec<ScoredItem> = candidates
                    .iter()
                    .enumerate()
                    .map(|(i, d)| {
                        ScoredItem::new(
                            i as u64,
                            environment_score(user, d),
                            self.predict_item(&user.interests, d),
                        )
                    })
                    .collect();
                let sol = self.config.serve_opt.solve(&items, k, self.null_score, 0.0)?;
                Ok((sol.ids().into_iter().map(|id| id as usize).collect(), false))
            }
        }
    }

    /// Expected slate value computed through the choice-model path:
    /// sum_i P(i|s,A) q_i plus the null term. Kept separate from
    /// `slate_opt::slate_value` so the two routes can be checked against
    /// each other.
    pub fn slate_expectation(items: &[ScoredItem], null_v: f64, null_q: f64) -> Result<f64> {
        let scores = ChoiceScores::new(items.iter().map(|i| i.v).collect(), null_v);
        let probs = conditional_probs(&scores)?;
        let mut total = probs[items.len()] * null_q;
        for (item, p) in items.iter().zip(&probs) {
            total += p * item.q;
        }
        Ok(total)
    }

    fn label_net(&self) -> &LabelNetwork {
        self.label.as_ref().expect("learning agent has a label network")
    }

    fn score_next(&self, tr: &Transition, idx: usize) -> (f64, f64) {
        let doc = tr.next_docs[idx].as_document(1.0);
        let v = 1.0 + tr.next_interests[doc.topic];
        let user = UserState { interests: tr.next_interests.clone(), budget: 1.0, alive: true };
        let q = self
            .label_net()
            .predict(&featurize(&user, &doc))
            .expect("consistent feature dims");
        (v, q)
    }

    /// On-policy target: bootstrap on the slate actually served at the
    /// successor event, with choice probabilities from the conditional model.
    pub fn sarsa_target(&self, tr: &Transition) -> Result<f64> {
        if tr.terminal {
            return Ok(tr.reward);
        }
        if tr.next_slate.is_empty() {
            return Err(SlateError::InvalidParam("non-terminal transition lacks next slate".into()));
        }
        let mut vs = Vec::with_capacity(tr.next_slate.len());
        let mut qs = Vec::with_capacity(tr.next_slate.len());
        for &idx in &tr.next_slate {
            let (v, q) = self.score_next(tr, idx);
            vs.push(v);
            qs.push(q);
        }
        let probs = conditional_probs(&ChoiceScores::new(vs, self.null_score))?;
        let expectation: f64 = probs.iter().zip(&qs).map(|(p, q)| p * q).sum();
        Ok(tr.reward + self.config.gamma * expectation)
    }

    /// Off-policy target: bootstrap on the maximizing slate over the
    /// successor event's candidate set, found by `train_opt`.
    pub fn qlearning_target(&self, tr: &Transition, train_opt: Optimizer) -> Result<f64> {
        if tr.terminal {
            return Ok(tr.reward);
        }
        if self.config.gamma == 0.0 {
            return Ok(tr.reward);
        }
        if tr.next_docs.is_empty() {
            return Err(SlateError::InvalidParam(
                "non-terminal transition lacks next candidates".into(),
            ));
        }
        let items: Vec<ScoredItem> = (0..tr.next_docs.len())
            .map(|i| {
                let (v, q) = self.score_next(tr, i);
                ScoredItem::new(i as u64, v, q)
            })
            .collect();
        let sol = train_opt.solve(&items, self.slate_size, self.null_score, 0.0)?;
        Ok(tr.reward + self.config.gamma * sol.value)
    }

    /// Atomic-slate target: bootstrap on the best enumerated successor slate.
    pub fn fsq_target(&self, tr: &Transition) -> Result<f64> {
        if tr.terminal || self.config.gamma == 0.0 {
            return Ok(tr.reward);
        }
        let m = tr.next_docs.len();
        let k = self.slate_size;
        if enumeration_count(m, k) > crate::slate_opt::BRUTE_FORCE_LIMIT {
            return Err(SlateError::EnumerationBudget {
                m,
                k,
                limit: crate::slate_opt::BRUTE_FORCE_LIMIT,
            });
        }
        let user = UserState { interests: tr.next_interests.clone(), budget: 1.0, alive: true };
        let docs: Vec<Document> = tr.next_docs.iter().map(|d| d.as_document(1.0)).collect();
        let label = self.label_net();
        let mut best = f64::NEG_INFINITY;
        for_each_combination(m, k, |combo| {
            let slate: Vec<&Document> = combo.iter().map(|&i| &docs[i]).collect();
            let q = label
                .predict(&featurize_slate(&user, &slate))
                .expect("consistent slate feature dims");
            if q > best {
                best = q;
            }
        });
        Ok(tr.reward + self.config.gamma * best)
    }

    /// Training input and target for one logged transition.
    fn training_example(&self, tr: &Transition) -> Result<(Vec<f64>, f64)> {
        match self.config.kind {
            AgentKind::Random => unreachable!("random agent never trains"),
            AgentKind::Fsq => {
                let user =
                    UserState { interests: tr.interests.clone(), budget: 1.0, alive: true };
                let docs: Vec<Document> =
                    tr.slate_docs.iter().map(|d| d.as_document(1.0)).collect();
                let refs: Vec<&Document> = docs.iter().collect();
                Ok((featurize_slate(&user, &refs), self.fsq_target(tr)?))
            }
            AgentKind::Myopic => {
                let x = self.clicked_features(tr);
                Ok((x, tr.reward))
            }
            AgentKind::Sarsa => Ok((self.clicked_features(tr), self.sarsa_target(tr)?)),
            AgentKind::QLearning => {
                let target = self.qlearning_target(tr, self.config.train_opt)?;
                Ok((self.clicked_features(tr), target))
            }
        }
    }

    fn clicked_features(&self, tr: &Transition) -> Vec<f64> {
        let user = UserState { interests: tr.interests.clone(), budget: 1.0, alive: true };
        let doc = tr.slate_docs[tr.clicked].as_document(1.0);
        featurize(&user, &doc)
    }

    fn sync_label(&mut self) {
        if let Some(net) = &self.net {
            self.label = Some(net.sync_label_network());
        }
    }

    pub fn num_topics(&self) -> usize {
        self.num_topics
    }
}

/// Visits all k-subsets of 0..m in lexicographic order.
pub fn for_each_combination(m: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut indices: Vec<usize> = (0..k).collect();
    loop {
        f(&indices);
        let mut i = k;
        loop {
            if i == 0 {
                return;
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

/// Evaluation metrics: mean session return and mean (per-session) quality of
/// clicked documents.
#[derive(Debug, Clone, Copy)]
pub struct Metrics {
    pub avg_return: f64,
    pub avg_quality: f64,
}

impl Metrics {
    /// Percentage improvement relative to a baseline value.
    pub fn pct_vs(value: f64, baseline: f64) -> f64 {
        (value - baseline) / baseline.abs() * 100.0
    }
}

/// One smoothed evaluation point on the training curve.
#[derive(Debug, Clone, Copy)]
pub struct CurvePoint {
    pub step: usize,
    pub smoothed_return: f64,
}

/// Wall-clock accounting for a training run.
#[derive(Debug, Clone, Copy, Default)]
pub struct TrainingStats {
    pub env_steps: usize,
    pub grad_batches: usize,
    /// Seconds spent computing targets and applying gradient batches.
    pub train_update_secs: f64,
    /// Fraction of training-mode serves that were exploratory.
    pub explore_fraction: f64,
}

impl TrainingStats {
    pub fn secs_per_batch(&self) -> f64 {
        if self.grad_batches == 0 {
            0.0
        } else {
            self.train_update_secs / self.grad_batches as f64
        }
    }
}

/// A finished training run.
pub struct TrainingOutcome {
    pub agent: Agent,
    pub curve: Vec<CurvePoint>,
    pub stats: TrainingStats,
}

/// Runs one user session with the given policy, returning total reward and
/// the list of clicked-document qualities. When `log` is provided, clicked
/// transitions are appended to it as they complete.
fn run_session<R: Rng>(
    agent: &Agent,
    env: &mut Environment,
    explore: bool,
    rng: &mut R,
    mut log: Option<&mut dyn FnMut(Transition)>,
    mut on_step: Option<&mut dyn FnMut(bool)>,
    step_budget: Option<&mut usize>,
) -> Result<(f64, Vec<f64>)> {
    let dynamics = env.config.dynamics();
    let mut user = sample_user(env.config.num_topics, &dynamics, rng);
    let mut total_reward = 0.0;
    let mut clicked_qualities = Vec::new();
    let mut pending: Option<Transition> = None;
    let mut remaining = step_budget;

    while user.alive {
        if let Some(rem) = remaining.as_deref_mut() {
            if *rem == 0 {
                break;
            }
            *rem -= 1;
        }
        let candidates = env.sample_candidates(rng);
        let (slate_idx, explored) = agent.serve(&user, &candidates, explore, rng)?;
        if let Some(f) = on_step.as_deref_mut() {
            f(explored);
        }
        let slate_docs: Vec<&Document> = slate_idx.iter().map(|&i| &candidates[i]).collect();

        // The previous clicked event's successor context is this event.
        if let Some(mut tr) = pending.take() {
            tr.next_interests = user.interests.clone();
            tr.next_docs = candidates.iter().map(DocFeat::of).collect();
            tr.next_slate = slate_idx.clone();
            tr.terminal = false;
            if let Some(f) = log.as_deref_mut() {
                f(tr);
            }
        }

        let probs = env.choice_probs(&user, &slate_docs)?;
        let choice = sample_choice(&probs, rng)?;
        if choice == NULL_CHOICE {
            apply_no_click(&mut user, &dynamics)?;
        } else {
            let doc = slate_docs[choice].clone();
            let interests_before = user.interests.clone();
            let reward = apply_click(&mut user, &doc, &dynamics, rng)?;
            total_reward += reward;
            clicked_qualities.push(doc.quality);
            if log.is_some() {
                pending = Some(Transition {
                    interests: interests_before,
                    slate_docs: slate_docs.iter().map(|d| DocFeat::of(d)).collect(),
                    clicked: choice,
                    reward,
                    terminal: true,
                    next_interests: Vec::new(),
                    next_docs: Vec::new(),
                    next_slate: Vec::new(),
                });
            }
        }
    }
    // A pending transition with no successor event is terminal.
    if let (Some(tr), Some(f)) = (pending.take(), log.as_deref_mut()) {
        f(tr);
    }
    Ok((total_reward, clicked_qualities))
}

/// Greedy-policy evaluation over `n_users` fresh sessions (no exploration).
pub fn evaluate(
    agent: &Agent,
    env: &mut Environment,
    n_users: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Metrics> {
    let mut returns = Vec::with_capacity(n_users);
    let mut session_qualities = Vec::new();
    for _ in 0..n_users {
        let (ret, quals) = run_session(agent, env, false, rng, None, None, None)?;
        returns.push(ret);
        if !quals.is_empty() {
            session_qualities.push(quals.iter().sum::<f64>() / quals.len() as f64);
        }
    }
    let avg_return = returns.iter().sum::<f64>() / n_users.max(1) as f64;
    let avg_quality = if session_qualities.is_empty() {
        0.0
    } else {
        session_qualities.iter().sum::<f64>() / session_qualities.len() as f64
    };
    Ok(Metrics { avg_return, avg_quality })
}

/// Trains one agent for `schedule.train_steps` environment events, with
/// epsilon-greedy exploration, replayed mini-batches, periodic label-network
/// syncs and periodic smoothed evaluations.
pub fn run_training(
    agent_config: AgentConfig,
    env_config: &EnvConfig,
    qmodel: &QModelConfig,
    schedule: &ScheduleConfig,
    seed: u64,
) -> Result<TrainingOutcome> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut eval_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let mut env = Environment::new(env_config.clone());
    let mut eval_env = Environment::new(env_config.clone());
    let mut agent = Agent::with_hidden(agent_config, env_config, &qmodel.hidden, &mut rng);

    let mut buffer: VecDeque<Transition> = VecDeque::with_capacity(qmodel.buffer_size);
    let mut curve = Vec::new();
    let mut stats = TrainingStats::default();
    let mut explore_serves = 0usize;
    let mut total_serves = 0usize;
    // Exponentially discounted average of all past evaluations.
    let (mut curve_num, mut curve_den) = (0.0f64, 0.0f64);
    let zeta = schedule.curve_smoothing;

    let mut steps_left = schedule.train_steps;
    while steps_left > 0 {
        let mut fresh: Vec<Transition> = Vec::new();
        {
            let mut log = |tr: Transition| fresh.push(tr);
            let mut on_step = |explored: bool| {
                total_serves += 1;
                if explored {
                    explore_serves += 1;
                }
            };
            run_session(
                &agent,
                &mut env,
                true,
                &mut rng,
                Some(&mut log),
                Some(&mut on_step),
                Some(&mut steps_left),
            )?;
        }
        for tr in fresh {
            if buffer.len() == qmodel.buffer_size {
                buffer.pop_front();
            }
            buffer.push_back(tr);

            if !agent.config.trains() || buffer.len() < qmodel.batch_size {
                continue;
            }
            let t0 = Instant::now();
            let mut batch = Vec::with_capacity(qmodel.batch_size);
            for _ in 0..qmodel.batch_size {
                let idx = rng.gen_range(0..buffer.len());
                batch.push(agent.training_example(&buffer[idx])?);
            }
            agent
                .net
                .as_mut()
                .expect("training agent has a network")
                .train_batch_clipped(&batch, qmodel.learning_rate, qmodel.max_grad_norm)?;
            stats.train_update_secs += t0.elapsed().as_secs_f64();
            stats.grad_batches += 1;
            if stats.grad_batches % qmodel.label_sync_period == 0 {
                agent.sync_label();
            }
            if stats.grad_batches % schedule.eval_every == 0 {
                let m = evaluate(&agent, &mut eval_env, schedule.eval_users, &mut eval_rng)?;
                curve_num = zeta * curve_num + m.avg_return;
                curve_den = zeta * curve_den + 1.0;
                curve.push(CurvePoint {
                    step: schedule.train_steps - steps_left,
                    smoothed_return: curve_num / curve_den,
                });
            }
        }
        // The random baseline still reports a (flat) curve.
        if !agent.config.trains() {
            let done = schedule.train_steps - steps_left;
            if done / schedule.eval_every > curve.len() {
                let m = evaluate(&agent, &mut eval_env, schedule.eval_users, &mut eval_rng)?;
                curve_num = zeta * curve_num + m.avg_return;
                curve_den = zeta * curve_den + 1.0;
                curve.push(CurvePoint { step: done, smoothed_return: curve_num / curve_den });
            }
        }
    }
    stats.env_steps = schedule.train_steps;
    stats.explore_fraction =
        if total_serves == 0 { 0.0 } else { explore_serves as f64 / total_serves as f64 };
    Ok(TrainingOutcome { agent, curve, stats })
}
