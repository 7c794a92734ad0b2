//! Refresh policies: the MDP index rule and the baseline comparators.

use std::collections::HashMap;

use serde::Serialize;

use crate::config::{Policy, SystemConfig};
use crate::error::{Error, Result};
use crate::mdp::{solve_content_mdp, ContentMdp, SolvedMdp, DEFAULT_EPSILON};
use crate::model::{Aoi, CacheState, UpdateAction};
use crate::reward::{row_aoi_utility, row_mbs_cost};

/// Solved per-`(rsu, content)` MDPs.
#[derive(Debug, Clone, Default)]
pub struct PolicyTable {
    solved: HashMap<(usize, usize), SolvedMdp>,
}

/// Threshold structure of one solved content, for inspection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyDumpEntry {
    pub rsu: usize,
    pub content: usize,
    pub max_aoi: Aoi,
    pub popularity: f64,
    pub cost: f64,
    pub refresh_threshold: Option<Aoi>,
}

pub fn content_mdp(
    state: &CacheState,
    cfg: &SystemConfig,
    rsu: usize,
    content: usize,
) -> ContentMdp {
    ContentMdp::new(
        cfg.max_aoi[content],
        state.popularity[(rsu, content)],
        cfg.update_cost[rsu][content],
        cfg.aoi_weight,
    )
}

impl PolicyTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves every covered content with popularity frozen at its value in
    /// `state`.
    pub fn solve_all(state: &CacheState, cfg: &SystemConfig) -> Result<Self> {
        let mut table = Self::new();
        for k in 0..cfg.num_rsus {
            table.resolve_row(state, cfg, k)?;
        }
        Ok(table)
    }

    pub fn resolve_row(
        &mut self,
        state: &CacheState,
        cfg: &SystemConfig,
        rsu: usize,
    ) -> Result<()> {
        for h in cfg.coverage_of(rsu)? {
            let solved = solve_content_mdp(&content_mdp(state, cfg, rsu, h), DEFAULT_EPSILON)?;
            self.solved.insert((rsu, h), solved);
        }
        Ok(())
    }

    pub fn insert(&mut self, rsu: usize, content: usize, solved: SolvedMdp) {
        self.solved.insert((rsu, content), solved);
    }

    pub fn get(&self, rsu: usize, content: usize) -> Option<&SolvedMdp> {
        self.solved.get(&(rsu, content))
    }

    pub fn dump(&self, state: &CacheState, cfg: &SystemConfig) -> Vec<PolicyDumpEntry> {
        cfg.covered_pairs()
            .filter_map(|(k, h)| {
                self.get(k, h).map(|s| PolicyDumpEntry {
                    rsu: k,
                    content: h,
                    max_aoi: cfg.max_aoi[h],
                    popularity: state.popularity[(k, h)],
                    cost: cfg.update_cost[k][h],
                    refresh_threshold: s.refresh_threshold(),
                })
            })
            .collect()
    }
}

/// Index rule: each RSU refreshes the covered content with the largest
/// positive refresh advantage at its current AoI, lowest index on ties.
pub fn select_updates(
    state: &CacheState,
    table: &PolicyTable,
    cfg: &SystemConfig,
) -> Result<UpdateAction> {
    let mut action = UpdateAction::for_config(cfg);
    for k in 0..cfg.num_rsus {
        let mut best: Option<(usize, f64)> = None;
        for h in cfg.coverage_of(k)? {
            let solved = table
                .get(k, h)
                .ok_or(Error::MissingPolicy { rsu: k, content: h })?;
            let adv = solved.advantage(state.rsu_aoi[(k, h)]);
            if adv > 0.0 && best.is_none_or(|(_, b)| adv > b) {
                best = Some((h, adv));
            }
        }
        if let Some((h, _)) = best {
            action.set(k, h, true);
        }
    }
    Ok(action)
}

/// Reference comparators for the index rule.
pub fn baseline_policy(
    kind: Policy,
    state: &CacheState,
    cfg: &SystemConfig,
) -> Result<UpdateAction> {
    let mut action = UpdateAction::for_config(cfg);
    match kind {
        Policy::NeverUpdate => {}
        Policy::Threshold => {
            for k in 0..cfg.num_rsus {
                // Most overdue first among contents that would exceed their limit.
                let pick = cfg
                    .coverage_of(k)?
                    .filter(|&h| state.rsu_aoi[(k, h)] + 1 > cfg.max_aoi[h])
                    .min_by_key(|&h| {
                        (
                            i64::from(cfg.max_aoi[h]) - i64::from(state.rsu_aoi[(k, h)]),
                            h,
                        )
                    });
                if let Some(h) = pick {
                    action.set(k, h, true);
                }
            }
        }
        Policy::AlwaysUpdate => {
            for k in 0..cfg.num_rsus {
                let mut best: Option<(usize, f64)> = None;
                for h in cfg.coverage_of(k)? {
                    let scale = state.popularity[(k, h)] * f64::from(cfg.max_aoi[h]);
                    let fresh = 1.0 / f64::from(state.mbs_aoi[h]);
                    let held = 1.0 / f64::from(state.rsu_aoi[(k, h)] + 1);
                    let gain = scale * (fresh - held);
                    if best.is_none_or(|(_, b)| gain > b) {
                        best = Some((h, gain));
                    }
                }
                if let Some((h, _)) = best {
                    action.set(k, h, true);
                }
            }
        }
        Policy::MyopicGreedy => {
            for k in 0..cfg.num_rsus {
                let row_reward = |a: &UpdateAction| {
                    row_aoi_utility(state, a, cfg, k) * cfg.aoi_weight - row_mbs_cost(a, cfg, k)
                };
                let mut best_h = None;
                let mut best = row_reward(&action);
                for h in cfg.coverage_of(k)? {
                    action.set(k, h, true);
                    let r = row_reward(&action);
                    action.set(k, h, false);
                    if r > best {
                        best = r;
                        best_h = Some(h);
                    }
                }
                if let Some(h) = best_h {
                    action.set(k, h, true);
                }
            }
        }
        Policy::MdpIndex => return Err(Error::UnknownKind(kind.name().into())),
    }
    Ok(action)
}

/// Picks the refresh action for `kind`, using `table` for the index rule.
pub fn refresh_action(
    kind: Policy,
    state: &CacheState,
    table: &PolicyTable,
    cfg: &SystemConfig,
) -> Result<UpdateAction> {
    match kind {
        Policy::MdpIndex => select_updates(state, table, cfg),
        other => baseline_policy(other, state, cfg),
    }
}
