//! Test-only oracles, independent of the library's solver paths.
#![allow(dead_code)]

use aoicache::presets;
use aoicache::{CacheAction, ContentMdp, SystemConfig};

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

fn transition(mdp: &ContentMdp, aoi: u32, act: CacheAction) -> (u32, f64) {
    // Written out from the model definition rather than calling the library.
    let cap = mdp.aoi_cap;
    let post = match act {
        CacheAction::Refresh => 1,
        CacheAction::Hold => (aoi + 1).min(cap),
    };
    let utility = mdp.weight * mdp.popularity * f64::from(mdp.max_aoi) / f64::from(post);
    let reward = match act {
        CacheAction::Refresh => utility - mdp.cost,
        CacheAction::Hold => utility,
    };
    (post, reward)
}

/// Exact value of a stationary policy: solves `(I - gamma P) v = r`.
pub fn evaluate_policy(mdp: &ContentMdp, policy: &[CacheAction]) -> Vec<f64> {
    let n = policy.len();
    let mut a = vec![vec![0.0; n]; n];
    let mut r = vec![0.0; n];
    for s in 0..n {
        let (next, reward) = transition(mdp, s as u32 + 1, policy[s]);
        a[s][s] += 1.0;
        a[s][next as usize - 1] -= mdp.discount;
        r[s] = reward;
    }
    solve_linear(a, r)
}

/// Enumerates all `2^n` stationary policies and returns the one whose
/// value dominates, together with its exact values.
pub fn brute_force(mdp: &ContentMdp) -> (Vec<CacheAction>, Vec<f64>) {
    let n = mdp.aoi_cap as usize;
    let mut best: Option<(Vec<CacheAction>, Vec<f64>)> = None;
    for mask in 0u32..(1 << n) {
        let policy: Vec<CacheAction> = (0..n)
            .map(|s| {
                if mask >> s & 1 == 1 {
                    CacheAction::Refresh
                } else {
                    CacheAction::Hold
                }
            })
            .collect();
        let v = evaluate_policy(mdp, &policy);
        let better = match &best {
            None => true,
            Some((_, bv)) => v.iter().sum::<f64>() > bv.iter().sum::<f64>(),
        };
        if better {
            best = Some((policy, v));
        }
    }
    best.unwrap()
}

/// Fig1 layout with `regions_per_rsu` contents on a single RSU.
pub fn single_rsu(contents: usize, max_aoi: u32) -> SystemConfig {
    let mut cfg = presets::fig1();
    cfg.num_rsus = 1;
    cfg.regions_per_rsu = contents;
    cfg.num_regions = contents;
    cfg.max_aoi = vec![max_aoi; contents];
    cfg.update_cost = vec![vec![0.5; contents]];
    cfg.uv_arrival_rate = 0.0;
    cfg
}
