//! AoI-aware RSU cache refresh and vehicle service simulator.
//!
//! A macro base station keeps master copies of one content per road
//! region and decides, each slot, which RSU copies to refresh. Each RSU
//! independently decides whether to serve the vehicles waiting in its
//! coverage. The refresh layer trades cached freshness against refresh
//! cost through a per-content MDP; the service layer trades service cost
//! against accumulated waiting through a drift-plus-penalty rule.

pub mod aoi;
pub mod config;
pub mod error;
pub mod mdp;
pub mod metrics;
pub mod model;
pub mod policy;
pub mod popularity;
pub mod presets;
pub mod reward;
pub mod rng;
pub mod service;
pub mod sim;

pub use config::{
    coverage_of, validate_config, Policy, PopularityMode, ServicePolicy, SystemConfig,
};
pub use error::{Error, Result};
pub use mdp::{solve_content_mdp, CacheAction, ContentMdp, SolvedMdp};
pub use metrics::{read_traces, summarize, write_traces, write_traces_to, RunSummary, TraceRow};
pub use model::{Aoi, CacheState, Grid, ServiceQueue, SlotTrace, UpdateAction, Uv};
pub use policy::{baseline_policy, select_updates, PolicyTable};
pub use reward::{aoi_utility, mbs_cost, stage_reward, RewardBreakdown};
pub use service::{
    aoi_admissible, decide_service, queue_step, service_baseline, Alpha, ServiceDecision,
};
pub use sim::{run, Simulator, WorldState};
