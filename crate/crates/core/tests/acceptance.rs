//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each
//! and exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use aoicache::metrics::write_traces_to;
use aoicache::service::{decide_service, Alpha};
use aoicache::{
    presets, run, solve_content_mdp, ContentMdp, Policy, ServicePolicy, ServiceQueue, SlotTrace,
    SystemConfig,
};

const SEEDS: u64 = 20;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn check(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn fig1(seed: u64, policy: Policy) -> SystemConfig {
    let mut cfg = presets::fig1();
    cfg.seed = seed;
    cfg.policy = policy;
    cfg
}

fn fig1_runs(policy: Policy) -> Vec<(SystemConfig, Vec<SlotTrace>)> {
    (1..=SEEDS)
        .map(|s| {
            let cfg = fig1(s, policy);
            let traces = run(&cfg).expect("fig1 run");
            (cfg, traces)
        })
        .collect()
}

fn aoi_limit() -> Outcome {
    let start = Instant::now();
    let mut violations = 0;
    let mut peak_excess = 0i64;
    for (cfg, traces) in fig1_runs(Policy::MdpIndex) {
        assert_eq!(cfg.mbs_generation_prob, 1.0);
        assert_eq!(traces.len(), 1000);
        for t in &traces {
            for (i, (_, h)) in cfg.covered_pairs().enumerate() {
                let a = t.rsu_aoi_samples[i];
                if a > cfg.max_aoi[h] {
                    violations += 1;
                    peak_excess = peak_excess.max(i64::from(a) - i64::from(cfg.max_aoi[h]));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        violations == 0 && elapsed < Duration::from_secs(5),
        format!("violations={violations} peak_excess={peak_excess} over {SEEDS} seeds in {elapsed:.2?} (limit 5s)"),
    )
}

fn rising_reward() -> Outcome {
    let start = Instant::now();
    let mut worst_positive_share: f64 = 1.0;
    let mut all_rising = true;
    for (_, traces) in fig1_runs(Policy::MdpIndex) {
        let positive =
            traces.iter().filter(|t| t.reward > 0.0).count() as f64 / traces.len() as f64;
        worst_positive_share = worst_positive_share.min(positive);
        let at_500 = traces[499].cumulative_reward;
        let at_1000 = traces[999].cumulative_reward;
        all_rising &= at_1000 > at_500;
    }
    let elapsed = start.elapsed();
    check(
        worst_positive_share >= 0.95 && all_rising && elapsed < Duration::from_secs(5),
        format!("min positive-slot share={worst_positive_share:.4} (>= 0.95), cum(1000) > cum(500) on all seeds: {all_rising}, {elapsed:.2?} (limit 5s)"),
    )
}

fn mean_final_reward(policy: Policy) -> f64 {
    let runs = fig1_runs(policy);
    runs.iter()
        .map(|(_, t)| t.last().unwrap().cumulative_reward)
        .sum::<f64>()
        / runs.len() as f64
}

fn policy_ordering() -> Outcome {
    let mdp = mean_final_reward(Policy::MdpIndex);
    let myopic = mean_final_reward(Policy::MyopicGreedy);
    let never = mean_final_reward(Policy::NeverUpdate);
    check(
        mdp >= myopic && myopic >= never && mdp > never,
        format!("mdp_index={mdp:.3} >= myopic_greedy={myopic:.3} >= never_update={never:.3}"),
    )
}

fn mdp_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut mismatches = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let max_aoi = rng.random_range(1..=4u32);
        let cap = rng.random_range(max_aoi.max(2)..=8u32);
        let mdp = ContentMdp::new(
            max_aoi,
            rng.random_range(0.0..1.0),
            rng.random_range(0.0..3.0),
            rng.random_range(0.1..3.0),
        )
        .with_discount(rng.random_range(0.0..0.95))
        .with_cap(cap);
        let solved = solve_content_mdp(&mdp, 1e-6).unwrap();
        let (policy, values) = common::brute_force(&mdp);
        if solved.policy != policy {
            mismatches += 1;
        }
        for (a, b) in solved.values.iter().zip(&values) {
            worst = worst.max((a - b).abs());
        }
    }
    let elapsed = start.elapsed();
    check(
        mismatches == 0 && worst <= 1e-6 && elapsed < Duration::from_secs(10),
        format!("policy mismatches={mismatches}/100, value sup-norm={worst:.2e} (<= 1e-6), {elapsed:.2?} (limit 10s)"),
    )
}

fn drift_plus_penalty_threshold() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut cfg = presets::fig1();
    let mut agree = 0;
    let mut trials = 0;
    let mut extremes_ok = true;
    while trials < 10_000 {
        cfg.lyapunov_v = rng.random_range(0.0..200.0);
        cfg.service_cost = rng.random_range(0.0..10.0);
        cfg.service_rate = rng.random_range(0.01..10.0);
        let backlog = rng.random_range(0.0..500.0);
        let threshold = cfg.lyapunov_v * cfg.service_cost / cfg.service_rate;
        if backlog == threshold {
            continue;
        }
        trials += 1;
        let q = ServiceQueue { rsu_id: 0, backlog };
        let serve = decide_service(&q, &cfg).alpha == Alpha::Serve;
        if serve == (backlog > threshold) {
            agree += 1;
        }
        let empty = ServiceQueue {
            rsu_id: 0,
            backlog: 0.0,
        };
        let huge = ServiceQueue {
            rsu_id: 0,
            backlog: 1e9,
        };
        extremes_ok &= decide_service(&empty, &cfg).alpha == Alpha::Idle;
        extremes_ok &= decide_service(&huge, &cfg).alpha == Alpha::Serve;
    }
    check(
        agree == trials && extremes_ok,
        format!(
            "agreement {agree}/{trials}, Q=0 idles and Q=1e9 serves on every draw: {extremes_ok}"
        ),
    )
}

fn queue_tradeoff() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut stats = Vec::new();
    for v in [1.0, 10.0, 100.0] {
        let mut backlog = 0.0;
        let mut cost = 0.0;
        for seed in 1..=SEEDS {
            let mut cfg = presets::fig1();
            cfg.seed = seed;
            cfg.horizon_slots = 10_000;
            cfg.service_rate = 1.0;
            cfg.uv_arrival_rate = 0.5 * cfg.service_rate;
            cfg.lyapunov_v = v;
            cfg.service_policy = ServicePolicy::Lyapunov;
            let traces = run(&cfg).unwrap();
            let n = traces.len() as f64;
            backlog += traces
                .iter()
                .map(|t| t.backlog.iter().sum::<f64>() / t.backlog.len() as f64)
                .sum::<f64>()
                / n;
            cost += traces.iter().map(|t| t.service_cost).sum::<f64>() / n;
        }
        backlog /= SEEDS as f64;
        cost /= SEEDS as f64;
        lines.push(format!("V={v}: backlog={backlog:.3} cost={cost:.4}"));
        stats.push((backlog, cost));
    }
    let elapsed = start.elapsed();
    let finite = stats.iter().all(|(b, _)| b.is_finite());
    let (b1, c1) = stats[0];
    let (b100, c100) = stats[2];
    check(
        finite && c100 <= c1 && b100 >= b1 && elapsed < Duration::from_secs(30),
        format!("{} ; {elapsed:.2?} (limit 30s)", lines.join(", ")),
    )
}

fn determinism() -> Outcome {
    let cfg = fig1(42, Policy::MdpIndex);
    let csv = || {
        let mut buf = Vec::new();
        write_traces_to(&run(&cfg).unwrap(), &cfg, &mut buf).unwrap();
        buf
    };
    let (a, b) = (csv(), csv());
    check(a == b, format!("{} bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("AoI-limit reproduction", aoi_limit),
        ("Rising cumulative reward", rising_reward),
        ("Policy ordering", policy_ordering),
        ("MDP oracle equivalence", mdp_oracle),
        (
            "Drift-plus-penalty threshold equivalence",
            drift_plus_penalty_threshold,
        ),
        ("Queue stability and V-tradeoff", queue_tradeoff),
        ("Determinism", determinism),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        let outcome = criterion();
        let tag = if outcome.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] {name}: {}", outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
