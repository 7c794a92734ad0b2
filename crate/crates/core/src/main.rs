use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use aoicache::metrics::{summarize, write_traces, RunSummary};
use aoicache::{presets, Error, Policy, Result, ServicePolicy, Simulator, SystemConfig};

#[derive(Parser)]
#[command(
    name = "aoicache",
    version,
    about = "AoI-aware RSU cache and service simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and write trace.csv and summary.json.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Refresh policy override (mdp_index, myopic_greedy, threshold, always_update, never_update).
        #[arg(long)]
        policy: Option<Policy>,
        /// Service policy override (lyapunov, always_serve, periodic:N).
        #[arg(long = "service-policy")]
        service_policy: Option<ServicePolicy>,
        /// Also write policy.json with per-content refresh thresholds.
        #[arg(long)]
        dump_policy: bool,
    },
    /// Run consecutive seeds starting at the config's seed.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seeds: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Print preset configurations as JSON.
    Presets {
        /// fig1 or fig2; prints both when omitted.
        name: Option<String>,
    },
}

#[derive(Serialize)]
struct Aggregate {
    seeds: Vec<u64>,
    mean_time_avg_reward: f64,
    mean_final_cumulative_reward: f64,
    mean_time_avg_mbs_cost: f64,
    mean_time_avg_service_cost: f64,
    total_constraint_violations: u64,
    runs: Vec<RunSummary>,
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

fn simulate(cfg: &SystemConfig, csv_path: &Path) -> Result<(Simulator, RunSummary)> {
    let mut sim = Simulator::new(cfg.clone())?;
    let traces = sim.run_to_end()?;
    write_traces(&traces, cfg, csv_path)?;
    let summary = summarize(&traces, cfg)?;
    Ok((sim, summary))
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            seed,
            out,
            policy,
            service_policy,
            dump_policy,
        } => {
            let mut cfg = SystemConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(p) = policy {
                cfg.policy = p;
            }
            if let Some(sp) = service_policy {
                cfg.service_policy = sp;
            }
            cfg.validate()?;
            fs::create_dir_all(&out)?;
            if cfg.horizon_slots == 0 {
                write_traces(&[], &cfg, out.join("trace.csv"))?;
                return Ok(());
            }
            let (sim, summary) = simulate(&cfg, &out.join("trace.csv"))?;
            write_json(&out.join("summary.json"), &summary)?;
            if dump_policy {
                let dump = sim.policies().dump(&sim.world().cache, &cfg);
                write_json(&out.join("policy.json"), &dump)?;
            }
            println!(
                "{} slots, reward/slot {:.4}, violations {}, drops {}",
                summary.slots,
                summary.time_avg_reward,
                summary.constraint_violations,
                summary.drop_count
            );
        }
        Command::Sweep { config, seeds, out } => {
            let base = SystemConfig::load(&config)?;
            fs::create_dir_all(&out)?;
            let seed_list: Vec<u64> = (0..seeds).map(|i| base.seed.wrapping_add(i)).collect();
            let runs = seed_list
                .par_iter()
                .map(|&s| {
                    let mut cfg = base.clone();
                    cfg.seed = s;
                    simulate(&cfg, &out.join(format!("trace_seed_{s}.csv")))
                        .map(|(_, summary)| summary)
                })
                .collect::<Result<Vec<_>>>()?;
            let n = runs.len().max(1) as f64;
            let avg = |f: fn(&RunSummary) -> f64| runs.iter().map(f).sum::<f64>() / n;
            let aggregate = Aggregate {
                seeds: seed_list,
                mean_time_avg_reward: avg(|r| r.time_avg_reward),
                mean_final_cumulative_reward: avg(|r| r.final_cumulative_reward),
                mean_time_avg_mbs_cost: avg(|r| r.time_avg_mbs_cost),
                mean_time_avg_service_cost: avg(|r| r.time_avg_service_cost),
                total_constraint_violations: runs.iter().map(|r| r.constraint_violations).sum(),
                runs,
            };
            write_json(&out.join("aggregate.json"), &aggregate)?;
            println!(
                "{} seeds written to {}",
                aggregate.seeds.len(),
                out.display()
            );
        }
        Command::Presets { name } => match name {
            Some(n) => {
                let cfg = presets::by_name(&n).ok_or_else(|| Error::UnknownKind(n.clone()))?;
                println!("{}", cfg.to_json());
            }
            None => {
                let all: serde_json::Map<String, serde_json::Value> = presets::NAMES
                    .iter()
                    .map(|n| {
                        let cfg = presets::by_name(n).expect("known preset");
                        (
                            n.to_string(),
                            serde_json::to_value(cfg).expect("config serializes"),
                        )
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&all)?);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::from(3)
            }
        }
    }
}
