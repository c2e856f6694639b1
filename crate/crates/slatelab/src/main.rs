use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slatelab::agents::{Agent, AgentConfig};
use slatelab::config::ExperimentConfig;
use slatelab::fixtures::{heuristic_counterexample, submodularity_violation, unbounded_ratio, Fixture};
use slatelab::harness::{final_eval, run_suite};
use slatelab::qmodel::QNetwork;
use slatelab::slate_opt::{Optimizer, ScoredItem};

/// Slate-based recommendation RL laboratory.
#[derive(Parser)]
#[command(name = "slatelab", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train every configured agent variant and report final metrics.
    Run {
        /// Path to the experiment config file (TOML).
        config: PathBuf,
        /// Output directory for metrics, curves and checkpoints.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Overrides the config's random seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Long schedule: 300K training steps, 5000 final-eval users.
        #[arg(long)]
        paper_scale: bool,
    },
    /// Evaluate a trained checkpoint without training.
    Eval {
        config: PathBuf,
        /// Checkpoint written by `run` (checkpoint_<AGENT>.json).
        checkpoint: PathBuf,
        /// Agent variant the checkpoint belongs to.
        #[arg(long, default_value = "SARSA-TS")]
        agent: String,
    },
    /// Slate-optimizer correctness and latency micro-suite.
    OptBench,
    /// Prints the counterexample-instance verdicts for each optimizer.
    Fixtures,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn dispatch(command: Command) -> slatelab::Result<()> {
    match command {
        Command::Run { config, out, seed, paper_scale } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if paper_scale {
                cfg.schedule.train_steps = 300_000;
                cfg.schedule.final_eval_users = 5000;
            }
            let result = run_suite(&cfg, &out)?;
            println!("wrote {}", result.metrics_path.display());
            for row in &result.rows {
                println!(
                    "{:<10} avg_return={:.2} avg_quality={:.4} ({:+.2}% / {:+.2}%)",
                    row.agent_name,
                    row.avg_return,
                    row.avg_quality,
                    row.pct_return_vs_baseline,
                    row.pct_quality_vs_baseline
                );
            }
            Ok(())
        }
        Command::Eval { config, checkpoint, agent } => {
            let cfg = ExperimentConfig::load(&config)?;
            let net = QNetwork::from_json(&std::fs::read_to_string(&checkpoint)?)?;
            let agent_cfg = AgentConfig::parse(&agent, cfg.agent.gamma, cfg.agent.epsilon)?;
            let agent = Agent::with_network(agent_cfg, &cfg.env, net);
            let metrics = final_eval(&agent, &cfg)?;
            println!(
                "{} avg_return={:.4} avg_quality={:.6} ({} users)",
                agent.config.name, metrics.avg_return, metrics.avg_quality,
                cfg.schedule.final_eval_users
            );
            Ok(())
        }
        Command::OptBench => opt_bench(),
        Command::Fixtures => {
            print_fixture(&heuristic_counterexample())?;
            print_fixture(&unbounded_ratio(0.01))?;
            print_fixture(&submodularity_violation(0.01))?;
            Ok(())
        }
    }
}

/// Compares every optimizer against brute-force enumeration on random
/// instances and reports mismatch counts and per-solve latency.
fn opt_bench() -> slatelab::Result<()> {
    const INSTANCES: usize = 2000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xbe_9c);
    let mut cases = Vec::with_capacity(INSTANCES);
    for _ in 0..INSTANCES {
        let m = rng.gen_range(4..=12);
        let k = rng.gen_range(1..=4.min(m));
        let items: Vec<ScoredItem> = (0..m)
            .map(|i| {
                ScoredItem::new(i as u64, rng.gen_range(0.01..3.0), rng.gen_range(-3.0..5.0))
            })
            .collect();
        let null_v = rng.gen_range(0.1..3.0);
        cases.push((items, k, null_v));
    }

    let reference: Vec<f64> = cases
        .iter()
        .map(|(items, k, null_v)| {
            Optimizer::BruteForce.solve(items, *k, *null_v, 0.0).map(|s| s.value)
        })
        .collect::<slatelab::Result<_>>()?;

    for opt in [Optimizer::TopK, Optimizer::Greedy, Optimizer::Exact, Optimizer::BruteForce] {
        let mut mismatches = 0usize;
        let mut worst_gap: f64 = 0.0;
        let start = std::time::Instant::now();
        for ((items, k, null_v), reference_value) in cases.iter().zip(&reference) {
            let value = opt.solve(items, *k, *null_v, 0.0)?.value;
            let gap = reference_value - value;
            if gap.abs() > 1e-9 {
                mismatches += 1;
                worst_gap = worst_gap.max(gap);
            }
        }
        let micros = start.elapsed().as_secs_f64() * 1e6 / INSTANCES as f64;
        println!(
            "{:<12} mismatches={:<4} worst_gap={:.6} avg_us_per_solve={:.2}",
            format!("{opt:?}"),
            mismatches,
            worst_gap,
            micros
        );
    }
    Ok(())
}

fn print_fixture(fx: &Fixture) -> slatelab::Result<()> {
    println!("{}: k={} null_v={} null_q={}", fx.name, fx.k, fx.null_v, fx.null_q);
    for opt in [Optimizer::TopK, Optimizer::Greedy, Optimizer::Exact, Optimizer::BruteForce] {
        let sol = opt.solve(&fx.items, fx.k, fx.null_v, fx.null_q)?;
        println!("  {:<12} value={:.6} slate={:?}", format!("{opt:?}"), sol.value, sol.ids());
    }
    Ok(())
}
