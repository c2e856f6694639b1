//! Experiment orchestration: runs a suite of agent variants against one
//! environment, persisting comma-separated metrics, per-agent training
//! curves and network checkpoints.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::agents::{evaluate, run_training, Agent, AgentConfig, Environment, Metrics};
use crate::config::ExperimentConfig;
use crate::{Result, SlateError};

/// One row of the suite metrics file.
#[derive(Debug, Clone)]
pub struct MetricsRow {
    pub agent_name: String,
    pub avg_return: f64,
    pub avg_quality: f64,
    pub pct_return_vs_baseline: f64,
    pub pct_quality_vs_baseline: f64,
    pub train_steps: usize,
    pub seed: u64,
    pub wall_clock_s: f64,
}

pub const METRICS_HEADER: &str = "agent_name,avg_return,avg_quality,pct_return_vs_baseline,\
pct_quality_vs_baseline,train_steps,seed,wall_clock_s";

impl MetricsRow {
    pub fn to_csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.agent_name,
            self.avg_return,
            self.avg_quality,
            self.pct_return_vs_baseline,
            self.pct_quality_vs_baseline,
            self.train_steps,
            self.seed,
            self.wall_clock_s
        )
    }
}

/// Filesystem layout of one suite's outputs.
pub struct SuiteOutput {
    pub metrics_path: PathBuf,
    pub rows: Vec<MetricsRow>,
}

pub fn curve_path(out_dir: &Path, agent: &str) -> PathBuf {
    out_dir.join(format!("curve_{agent}.csv"))
}

pub fn checkpoint_path(out_dir: &Path, agent: &str) -> PathBuf {
    out_dir.join(format!("checkpoint_{agent}.json"))
}

/// Runs every configured agent variant sequentially, Random first as the
/// baseline, and writes `metrics.csv` plus one curve file (and, for learning
/// agents, one checkpoint) per agent. The metrics file is flushed after each
/// completed run so partial results survive a failure.
pub fn run_suite(config: &ExperimentConfig, out_dir: &Path) -> Result<SuiteOutput> {
    fs::create_dir_all(out_dir)?;
    let metrics_path = out_dir.join("metrics.csv");
    let mut file = fs::File::create(&metrics_path)?;
    writeln!(file, "# config_hash={:016x} seed={}", config.hash(), config.seed)?;
    writeln!(file, "{METRICS_HEADER}")?;
    file.flush()?;

    // Random always runs first so every row has a baseline to compare
    // against, whether or not the config lists it.
    let mut variants: Vec<String> = vec!["RANDOM".into()];
    variants.extend(config.agent.variants.iter().filter(|v| *v != "RANDOM").cloned());

    let mut rows: Vec<MetricsRow> = Vec::new();
    let mut baseline: Option<Metrics> = None;
    for variant in &variants {
        let row = run_one(config, variant, out_dir, baseline.as_ref())?;
        if baseline.is_none() {
            baseline = Some(Metrics { avg_return: row.avg_return, avg_quality: row.avg_quality });
        }
        writeln!(file, "{}", row.to_csv_line())?;
        file.flush()?;
        rows.push(row);
    }
    Ok(SuiteOutput { metrics_path, rows })
}

/// Trains and evaluates a single variant, writing its curve and checkpoint.
fn run_one(
    config: &ExperimentConfig,
    variant: &str,
    out_dir: &Path,
    baseline: Option<&Metrics>,
) -> Result<MetricsRow> {
    let agent_cfg = AgentConfig::parse(variant, config.agent.gamma, config.agent.epsilon)?;
    let started = Instant::now();
    let outcome =
        run_training(agent_cfg, &config.env, &config.qmodel, &config.schedule, config.seed)?;

    let mut curve_file = fs::File::create(curve_path(out_dir, variant))?;
    writeln!(curve_file, "# config_hash={:016x} seed={}", config.hash(), config.seed)?;
    writeln!(curve_file, "step,smoothed_return")?;
    for point in &outcome.curve {
        writeln!(curve_file, "{},{}", point.step, point.smoothed_return)?;
    }

    if let Some(net) = &outcome.agent.net {
        fs::write(checkpoint_path(out_dir, variant), net.to_json())?;
    }

    let metrics = final_eval(&outcome.agent, config)?;
    let wall_clock_s = started.elapsed().as_secs_f64();
    Ok(row_from(variant, &metrics, baseline, config, wall_clock_s))
}

/// Final greedy evaluation over `final_eval_users` fresh sessions, seeded
/// independently of training.
pub fn final_eval(agent: &Agent, config: &ExperimentConfig) -> Result<Metrics> {
    let mut env = Environment::new(config.env.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(0x5eed_f00d));
    evaluate(agent, &mut env, config.schedule.final_eval_users, &mut rng)
}

fn row_from(
    variant: &str,
    metrics: &Metrics,
    baseline: Option<&Metrics>,
    config: &ExperimentConfig,
    wall_clock_s: f64,
) -> MetricsRow {
    let (pct_return, pct_quality) = match baseline {
        Some(b) => (
            Metrics::pct_vs(metrics.avg_return, b.avg_return),
            Metrics::pct_vs(metrics.avg_quality, b.avg_quality),
        ),
        None => (0.0, 0.0),
    };
    MetricsRow {
        agent_name: variant.to_string(),
        avg_return: metrics.avg_return,
        avg_quality: metrics.avg_quality,
        pct_return_vs_baseline: pct_return,
        pct_quality_vs_baseline: pct_quality,
        train_steps: config.schedule.train_steps,
        seed: config.seed,
        wall_clock_s,
    }
}

/// Parses a metrics file back into rows (used by tests and `eval` tooling).
pub fn parse_metrics(text: &str) -> Result<Vec<MetricsRow>> {
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("agent_name") || line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 8 {
            return Err(SlateError::Config(format!("bad metrics line: {line}")));
        }
        let f = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| SlateError::Config(format!("bad number '{s}'")))
        };
        rows.push(MetricsRow {
            agent_name: parts[0].to_string(),
            avg_return: f(parts[1])?,
            avg_quality: f(parts[2])?,
            pct_return_vs_baseline: f(parts[3])?,
            pct_quality_vs_baseline: f(parts[4])?,
            train_steps: parts[5]
                .parse()
                .map_err(|_| SlateError::Config(format!("bad step count '{}'", parts[5])))?,
            seed: parts[6]
                .parse()
                .map_err(|_| SlateError::Config(format!("bad seed '{}'", parts[6])))?,
            wall_clock_s: f(parts[7])?,
        });
    }
    Ok(rows)
}
