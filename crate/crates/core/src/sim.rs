//! Slot-by-slot simulation loop.
//!
//! Phase order inside a slot:
//!
//! 1. MBS content generation and master aging.
//! 2. Refresh decision on the post-generation state, then RSU aging.
//! 3. Vehicle arrivals at position 0 with a random requested content.
//! 4. Mobility of vehicles that were already on the road; exits are
//!    removed and unserved exits count as drops.
//! 5. Queue arrivals: one request-slot per unserved vehicle in coverage
//!    whose content the covering RSU caches. Other unserved vehicles in
//!    coverage are misses.
//! 6. Service decision, admissibility gate and queue update per RSU.
//! 7. Popularity update (empirical mode) and policy re-solve on drift.
//! 8. Reward accounting and trace emission.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Poisson;

use crate::aoi::{advance_mbs_aoi, advance_rsu_aoi};
use crate::config::{Policy, PopularityMode, SystemConfig};
use crate::error::Result;
use crate::model::{zipf_weights, Aoi, CacheState, Grid, ServiceQueue, SlotTrace, Uv};
use crate::policy::{refresh_action, PolicyTable};
use crate::popularity::PopularityTracker;
use crate::reward::stage_reward;
use crate::rng::RngStreams;
use crate::service::{aoi_admissible, queue_step, service_decision};

/// L1 popularity drift of an RSU row that triggers a re-solve.
pub const RESOLVE_DRIFT: f64 = 0.1;

const MAX_INIT_ATTEMPTS: usize = 1_000;

#[derive(Debug, Clone)]
pub struct WorldState {
    pub slot: u64,
    pub cache: CacheState,
    pub queues: Vec<ServiceQueue>,
    pub uvs: Vec<Uv>,
    pub rng: RngStreams,
    pub cumulative_reward: f64,
    next_uv_id: u64,
}

/// Running request accounting since the start of the run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RequestTotals {
    pub issued: u64,
    pub served: u64,
    pub dropped: u64,
}

pub struct Simulator {
    cfg: SystemConfig,
    world: WorldState,
    table: PolicyTable,
    solved_popularity: Grid<f64>,
    tracker: Option<PopularityTracker>,
    request_weights: Option<WeightedIndex<f64>>,
    arrivals: Option<Poisson<f64>>,
    totals: RequestTotals,
}

/// Slack-ordered check that one refresh per slot can keep every content of
/// the row within its limit: the j-th smallest slack must be at least j.
fn row_schedulable(slacks: &mut [i64]) -> bool {
    slacks.sort_unstable();
    slacks.iter().enumerate().all(|(j, &s)| s >= j as i64)
}

/// Random initial AoIs: each cached copy uniform in `1..=A^max_h`,
/// redrawn per RSU until one refresh per slot can keep the row within its
/// limits, and each master uniform in `1..=` its cached copy's age.
pub fn initial_cache(cfg: &SystemConfig, rng: &mut ChaCha8Rng) -> CacheState {
    let mut cache = CacheState::uniform(cfg, 1);
    for k in 0..cfg.num_rsus {
        let cover = k * cfg.regions_per_rsu..(k + 1) * cfg.regions_per_rsu;
        let mut row: Vec<Aoi> = Vec::new();
        for _ in 0..MAX_INIT_ATTEMPTS {
            row = cover
                .clone()
                .map(|h| rng.random_range(1..=cfg.max_aoi[h]))
                .collect();
            let mut slacks: Vec<i64> = cover
                .clone()
                .zip(&row)
                .map(|(h, &a)| i64::from(cfg.max_aoi[h]) - i64::from(a))
                .collect();
            if row_schedulable(&mut slacks) {
                break;
            }
        }
        for (h, a) in cover.zip(row) {
            cache.rsu_aoi[(k, h)] = a;
        }
    }
    for h in 0..cfg.num_regions {
        let cached = cache.rsu_aoi[(cfg.rsu_of(h), h)];
        cache.mbs_aoi[h] = rng.random_range(1..=cached);
    }
    cache
}

impl Simulator {
    pub fn new(cfg: SystemConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = RngStreams::new(cfg.seed);
        let cache = initial_cache(&cfg, &mut rng.initial_aoi);
        Self::build(cfg, cache, rng)
    }

    /// Starts from a caller-supplied cache instead of random AoIs.
    pub fn with_cache(cfg: SystemConfig, cache: CacheState) -> Result<Self> {
        cfg.validate()?;
        cache.check(&cfg)?;
        let rng = RngStreams::new(cfg.seed);
        Self::build(cfg, cache, rng)
    }

    fn build(cfg: SystemConfig, cache: CacheState, rng: RngStreams) -> Result<Self> {
        let table = if cfg.policy == Policy::MdpIndex {
            PolicyTable::solve_all(&cache, &cfg)?
        } else {
            PolicyTable::new()
        };
        let tracker = match cfg.popularity_mode {
            PopularityMode::Empirical { window_slots } => {
                Some(PopularityTracker::new(&cfg, window_slots))
            }
            PopularityMode::StaticZipf { .. } => None,
        };
        let request_weights = match cfg.popularity_mode {
            PopularityMode::StaticZipf { exponent } if exponent > 0.0 => {
                let local = zipf_weights(cfg.regions_per_rsu, exponent);
                let weights = (0..cfg.num_regions).map(|h| local[h % cfg.regions_per_rsu]);
                Some(WeightedIndex::new(weights).expect("zipf weights are positive"))
            }
            _ => None,
        };
        let arrivals = if cfg.uv_arrival_rate > 0.0 {
            Some(Poisson::new(cfg.uv_arrival_rate).expect("validated arrival rate"))
        } else {
            None
        };
        let queues = (0..cfg.num_rsus).map(ServiceQueue::empty).collect();
        Ok(Self {
            solved_popularity: cache.popularity.clone(),
            world: WorldState {
                slot: 0,
                cache,
                queues,
                uvs: Vec::new(),
                rng,
                cumulative_reward: 0.0,
                next_uv_id: 0,
            },
            cfg,
            table,
            tracker,
            request_weights,
            arrivals,
            totals: RequestTotals::default(),
        })
    }

    pub fn config(&self) -> &SystemConfig {
        &self.cfg
    }

    pub fn world(&self) -> &WorldState {
        &self.world
    }

    pub fn policies(&self) -> &PolicyTable {
        &self.table
    }

    pub fn totals(&self) -> RequestTotals {
        self.totals
    }

    /// Advances the world by one slot.
    pub fn step(&mut self) -> Result<SlotTrace> {
        let cfg = &self.cfg;
        let world = &mut self.world;
        world.slot += 1;
        let slot = world.slot;
        let road = cfg.num_regions as f64;

        // 1. generation
        let gen_rng = &mut world.rng.content_generation;
        let generated: Vec<bool> = (0..cfg.num_regions)
            .map(|_| gen_rng.random_bool(cfg.mbs_generation_prob))
            .collect();
        world.cache.mbs_aoi = advance_mbs_aoi(&world.cache.mbs_aoi, &generated)?;

        // 2. refresh
        let decision_state = world.cache.clone();
        let action = refresh_action(cfg.policy, &decision_state, &self.table, cfg)?;
        world.cache = advance_rsu_aoi(&decision_state, &action, cfg)?;

        // 3. arrivals
        let already_active = world.uvs.len();
        let drawn = self
            .arrivals
            .as_ref()
            .map_or(0, |p| p.sample(&mut world.rng.uv_arrivals) as usize);
        let admitted = drawn.min(cfg.num_uvs.saturating_sub(already_active));
        for _ in 0..admitted {
            let content = match &self.request_weights {
                Some(w) => w.sample(&mut world.rng.requests),
                None => world.rng.requests.random_range(0..cfg.num_regions),
            };
            if let Some(t) = self.tracker.as_mut() {
                t.record(content);
            }
            world.uvs.push(Uv {
                id: world.next_uv_id,
                position: 0.0,
                requested_content: content,
                wait_slots: 0,
                served: false,
            });
            world.next_uv_id += 1;
        }

        // 4. mobility
        let mut drops = 0;
        let mut handoffs = 0;
        for uv in &mut world.uvs[..already_active] {
            let before = cfg.rsu_of(uv.region());
            uv.position += cfg.uv_speed;
            if uv.position >= road {
                if !uv.served {
                    drops += 1;
                }
            } else if !uv.served && cfg.rsu_of(uv.region()) != before {
                handoffs += 1;
            }
        }
        world.uvs.retain(|uv| uv.position < road);

        // 5. queue arrivals
        let mut pending: Vec<Vec<usize>> = vec![Vec::new(); cfg.num_rsus];
        let mut misses = 0;
        for (i, uv) in world.uvs.iter().enumerate() {
            if uv.served {
                continue;
            }
            let k = cfg.rsu_of(uv.region());
            if cfg.rsu_of(uv.requested_content) == k {
                pending[k].push(i);
            } else {
                misses += 1;
            }
        }

        // 6. service
        let capacity = cfg.service_rate.ceil() as usize;
        let mut served = vec![0u32; cfg.num_rsus];
        let mut serving = vec![false; cfg.num_rsus];
        let mut service_cost = 0.0;
        let mut gate_blocked = 0;
        for k in 0..cfg.num_rsus {
            let q = world.queues[k];
            let decision = service_decision(&q, slot, cfg)?;
            if decision.serves() {
                serving[k] = true;
                service_cost += decision.cost(cfg);
                for &i in &pending[k] {
                    if served[k] as usize >= capacity {
                        break;
                    }
                    let uv = &mut world.uvs[i];
                    if aoi_admissible(k, uv.requested_content, &world.cache, cfg)? {
                        uv.served = true;
                        served[k] += 1;
                    } else {
                        gate_blocked += 1;
                    }
                }
            }
            world.queues[k] = queue_step(&q, pending[k].len() as f64, &decision, cfg)?;
        }

        // 7. popularity
        if let Some(tracker) = self.tracker.as_mut() {
            tracker.end_slot();
            for k in 0..cfg.num_rsus {
                let row = tracker.row(k);
                let start = k * cfg.regions_per_rsu;
                world.cache.popularity.row_mut(k)[start..start + row.len()].copy_from_slice(&row);
                if cfg.policy == Policy::MdpIndex {
                    let drift: f64 = world
                        .cache
                        .popularity
                        .row(k)
                        .iter()
                        .zip(self.solved_popularity.row(k))
                        .map(|(a, b)| (a - b).abs())
                        .sum();
                    if drift > RESOLVE_DRIFT {
                        self.table.resolve_row(&world.cache, cfg, k)?;
                        let fresh = world.cache.popularity.row(k).to_vec();
                        self.solved_popularity.row_mut(k).copy_from_slice(&fresh);
                    }
                }
            }
        }

        // 8. accounting
        let reward = stage_reward(&decision_state, &action, cfg);
        world.cumulative_reward += reward.total;
        let mut pending_after = 0;
        for uv in world.uvs.iter_mut().filter(|uv| !uv.served) {
            uv.wait_slots += 1;
            pending_after += 1;
        }
        let served_count: u32 = served.iter().sum();
        self.totals.issued += admitted as u64;
        self.totals.served += u64::from(served_count);
        self.totals.dropped += drops as u64;

        let mut samples = Vec::with_capacity(cfg.num_regions);
        let mut aoi_sum = vec![0u64; cfg.num_rsus];
        for (k, h) in cfg.covered_pairs() {
            let a = world.cache.rsu_aoi[(k, h)];
            samples.push(a);
            aoi_sum[k] += u64::from(a);
        }

        Ok(SlotTrace {
            slot,
            rsu_aoi_samples: samples,
            reward: reward.total,
            aoi_utility: reward.aoi_utility,
            mbs_cost: reward.mbs_cost,
            cumulative_reward: world.cumulative_reward,
            backlog: world.queues.iter().map(|q| q.backlog).collect(),
            served,
            serving,
            aoi_sum,
            served_count,
            updates_issued: action.count() as u32,
            service_cost,
            requests_issued: admitted as u32,
            misses,
            gate_blocked,
            handoffs,
            drops,
            pending: pending_after,
        })
    }

    /// Runs the remaining horizon and returns every slot's trace.
    pub fn run_to_end(&mut self) -> Result<Vec<SlotTrace>> {
        let remaining = self.cfg.horizon_slots.saturating_sub(self.world.slot);
        let mut traces = Vec::with_capacity(remaining as usize);
        for _ in 0..remaining {
            traces.push(self.step()?);
        }
        Ok(traces)
    }
}

/// Runs `cfg.horizon_slots` slots from a random initial state.
pub fn run(cfg: &SystemConfig) -> Result<Vec<SlotTrace>> {
    Simulator::new(cfg.clone())?.run_to_end()
}
