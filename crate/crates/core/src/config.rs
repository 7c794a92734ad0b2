//! Experiment configuration and its validation.
//!
//! The JSON form mirrors [`SystemConfig`] field for field. Unknown keys are
//! rejected so that a typo in a sweep file fails loudly instead of silently
//! falling back to a default.

use std::fmt;
use std::fs;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How per-RSU content popularity `p[k][h]` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PopularityMode {
    /// Fixed Zipf weights over the local content index of each RSU.
    /// Exponent 0 is uniform.
    StaticZipf { exponent: f64 },
    /// Sliding-window request frequencies observed at each RSU.
    Empirical { window_slots: usize },
}

/// Cache refresh policy run by the MBS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    MdpIndex,
    MyopicGreedy,
    Threshold,
    AlwaysUpdate,
    NeverUpdate,
}

impl Policy {
    pub const ALL: [Policy; 5] = [
        Policy::MdpIndex,
        Policy::MyopicGreedy,
        Policy::Threshold,
        Policy::AlwaysUpdate,
        Policy::NeverUpdate,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Policy::MdpIndex => "mdp_index",
            Policy::MyopicGreedy => "myopic_greedy",
            Policy::Threshold => "threshold",
            Policy::AlwaysUpdate => "always_update",
            Policy::NeverUpdate => "never_update",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Policy::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Per-RSU service policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ServicePolicy {
    Lyapunov,
    AlwaysServe,
    Periodic { period: u64 },
}

impl fmt::Display for ServicePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ServicePolicy::Lyapunov => f.write_str("lyapunov"),
            ServicePolicy::AlwaysServe => f.write_str("always_serve"),
            ServicePolicy::Periodic { period } => write!(f, "periodic:{period}"),
        }
    }
}

impl FromStr for ServicePolicy {
    type Err = Error;

    /// Accepts `lyapunov`, `always_serve`, `periodic:N` and `periodic(N)`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lyapunov" => return Ok(ServicePolicy::Lyapunov),
            "always_serve" => return Ok(ServicePolicy::AlwaysServe),
            _ => {}
        }
        let arg = s
            .strip_prefix("periodic:")
            .or_else(|| {
                s.strip_prefix("periodic(")
                    .and_then(|r| r.strip_suffix(')'))
            })
            .ok_or_else(|| Error::UnknownKind(s.to_string()))?;
        let period: u64 = arg
            .trim()
            .parse()
            .map_err(|_| Error::UnknownKind(s.to_string()))?;
        if period < 1 {
            return Err(Error::BadPeriod(period));
        }
        Ok(ServicePolicy::Periodic { period })
    }
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemConfig {
    /// Maximum number of vehicles simultaneously on the road.
    pub num_uvs: usize,
    pub num_rsus: usize,
    pub num_regions: usize,
    pub regions_per_rsu: usize,
    /// Per-content AoI limit in slots, one entry per region.
    pub max_aoi: Vec<u32>,
    pub aoi_weight: f64,
    /// `num_rsus x num_regions` refresh cost matrix.
    pub update_cost: Vec<Vec<f64>>,
    pub service_cost: f64,
    pub service_rate: f64,
    pub lyapunov_v: f64,
    pub mbs_generation_prob: f64,
    pub uv_arrival_rate: f64,
    pub uv_speed: f64,
    pub popularity_mode: PopularityMode,
    pub horizon_slots: u64,
    pub seed: u64,
    pub policy: Policy,
    pub service_policy: ServicePolicy,
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_nan() || v < 0.0 {
        return Err(Error::NegativeParameter(format!("{name} = {v}")));
    }
    Ok(())
}

impl SystemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Reads and validates a configuration file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        validate_config(Self::from_json(&text)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_rsus == 0 || self.regions_per_rsu == 0 {
            return Err(Error::InvalidTopology(
                "need at least one RSU covering at least one region".into(),
            ));
        }
        if self.num_regions != self.num_rsus * self.regions_per_rsu {
            return Err(Error::InvalidTopology(format!(
                "num_regions {} != num_rsus {} x regions_per_rsu {}",
                self.num_regions, self.num_rsus, self.regions_per_rsu
            )));
        }
        if self.max_aoi.len() != self.num_regions {
            return Err(Error::InvalidTopology(format!(
                "max_aoi has {} entries for {} regions",
                self.max_aoi.len(),
                self.num_regions
            )));
        }
        if let Some(h) = self.max_aoi.iter().position(|&a| a < 1) {
            return Err(Error::NonPositiveLimit(format!("max_aoi[{h}] < 1")));
        }
        if self.service_rate.is_nan() || self.service_rate <= 0.0 {
            return Err(Error::NonPositiveLimit(format!(
                "service_rate = {}",
                self.service_rate
            )));
        }
        if self.uv_speed.is_nan() || self.uv_speed <= 0.0 {
            return Err(Error::NonPositiveLimit(format!(
                "uv_speed = {}",
                self.uv_speed
            )));
        }
        nonneg("aoi_weight", self.aoi_weight)?;
        nonneg("lyapunov_v", self.lyapunov_v)?;
        nonneg("service_cost", self.service_cost)?;
        nonneg("uv_arrival_rate", self.uv_arrival_rate)?;
        for v in [
            self.aoi_weight,
            self.lyapunov_v,
            self.service_cost,
            self.service_rate,
            self.uv_arrival_rate,
            self.uv_speed,
        ] {
            if !v.is_finite() {
                return Err(Error::NegativeParameter(format!(
                    "non-finite parameter {v}"
                )));
            }
        }
        nonneg("mbs_generation_prob", self.mbs_generation_prob)?;
        if self.mbs_generation_prob > 1.0 {
            return Err(Error::InvalidTopology(format!(
                "mbs_generation_prob {} exceeds 1",
                self.mbs_generation_prob
            )));
        }
        if self.update_cost.len() != self.num_rsus
            || self
                .update_cost
                .iter()
                .any(|row| row.len() != self.num_regions)
        {
            return Err(Error::InvalidTopology(format!(
                "update_cost must be {} x {}",
                self.num_rsus, self.num_regions
            )));
        }
        for (k, row) in self.update_cost.iter().enumerate() {
            for (h, &c) in row.iter().enumerate() {
                if !c.is_finite() {
                    return Err(Error::NegativeParameter(format!(
                        "update_cost[{k}][{h}] = {c}"
                    )));
                }
                nonneg(&format!("update_cost[{k}][{h}]"), c)?;
            }
        }
        match self.popularity_mode {
            PopularityMode::StaticZipf { exponent } => {
                if !exponent.is_finite() || exponent < 0.0 {
                    return Err(Error::BadPopularityMode(format!(
                        "zipf exponent {exponent}"
                    )));
                }
            }
            PopularityMode::Empirical { window_slots } => {
                if window_slots == 0 {
                    return Err(Error::BadPopularityMode(
                        "empirical window of 0 slots".into(),
                    ));
                }
            }
        }
        if let ServicePolicy::Periodic { period } = self.service_policy {
            if period < 1 {
                return Err(Error::BadPeriod(period));
            }
        }
        Ok(())
    }

    /// Regions covered by `rsu`: `[rsu * L', (rsu + 1) * L')`.
    pub fn coverage_of(&self, rsu: usize) -> Result<Range<usize>> {
        coverage_of(rsu, self)
    }

    /// The RSU whose coverage contains `region`.
    pub fn rsu_of(&self, region: usize) -> usize {
        region / self.regions_per_rsu
    }

    /// Iterates every covered `(rsu, content)` pair in row-major order.
    pub fn covered_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.num_rsus).flat_map(move |k| {
            let start = k * self.regions_per_rsu;
            (start..start + self.regions_per_rsu).map(move |h| (k, h))
        })
    }
}

/// Returns `cfg` unchanged when every configuration invariant holds.
pub fn validate_config(cfg: SystemConfig) -> Result<SystemConfig> {
    cfg.validate()?;
    Ok(cfg)
}

pub fn coverage_of(rsu: usize, cfg: &SystemConfig) -> Result<Range<usize>> {
    if rsu >= cfg.num_rsus {
        return Err(Error::IndexOutOfRange {
            index: rsu,
            len: cfg.num_rsus,
        });
    }
    let start = rsu * cfg.regions_per_rsu;
    Ok(start..start + cfg.regions_per_rsu)
}
