//! Per-slot MBS reward: weighted AoI utility of the RSU caches minus the
//! refresh cost.

use serde::Serialize;

use crate::aoi::post_action_aoi;
use crate::config::SystemConfig;
use crate::model::{CacheState, UpdateAction};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RewardBreakdown {
    pub aoi_utility: f64,
    pub mbs_cost: f64,
    /// `aoi_utility * w - mbs_cost`
    pub total: f64,
}

/// Utility of RSU `rsu`'s covered contents, evaluated on post-action AoI.
pub fn row_aoi_utility(
    state: &CacheState,
    action: &UpdateAction,
    cfg: &SystemConfig,
    rsu: usize,
) -> f64 {
    let start = rsu * cfg.regions_per_rsu;
    (start..start + cfg.regions_per_rsu)
        .map(|h| {
            let a = post_action_aoi(state, action, rsu, h);
            f64::from(cfg.max_aoi[h]) / f64::from(a) * state.popularity[(rsu, h)]
        })
        .sum()
}

pub fn row_mbs_cost(action: &UpdateAction, cfg: &SystemConfig, rsu: usize) -> f64 {
    action
        .refreshed(rsu)
        .map_or(0.0, |h| cfg.update_cost[rsu][h])
}

/// Sum over RSUs and covered contents of `A^max_h / A^R_{k,h} * p[k][h]`.
pub fn aoi_utility(state: &CacheState, action: &UpdateAction, cfg: &SystemConfig) -> f64 {
    (0..cfg.num_rsus)
        .map(|k| row_aoi_utility(state, action, cfg, k))
        .sum()
}

pub fn mbs_cost(action: &UpdateAction, cfg: &SystemConfig) -> f64 {
    let mut cost = 0.0;
    for k in 0..action.num_rsus() {
        for (h, c) in cfg.update_cost[k].iter().enumerate() {
            if action.get(k, h) {
                cost += c;
            }
        }
    }
    cost
}

pub fn stage_reward(
    state: &CacheState,
    action: &UpdateAction,
    cfg: &SystemConfig,
) -> RewardBreakdown {
    let aoi_utility = aoi_utility(state, action, cfg);
    let mbs_cost = mbs_cost(action, cfg);
    RewardBreakdown {
        aoi_utility,
        mbs_cost,
        total: aoi_utility * cfg.aoi_weight - mbs_cost,
    }
}
