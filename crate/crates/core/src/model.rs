//! Domain state shared by the refresh and service layers.

use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::config::{PopularityMode, SystemConfig};
use crate::error::{Error, Result};

/// Age of information in whole slots. A content generated this slot has age 1.
pub type Aoi = u32;

/// Dense row-major `rows x cols` matrix indexed by `(row, col)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }
}

impl<T> Grid<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    actual: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [T] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }
}

impl<T> Index<(usize, usize)> for Grid<T> {
    type Output = T;

    fn index(&self, (r, c): (usize, usize)) -> &T {
        assert!(
            r < self.rows && c < self.cols,
            "grid index ({r}, {c}) out of bounds"
        );
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Grid<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        assert!(
            r < self.rows && c < self.cols,
            "grid index ({r}, {c}) out of bounds"
        );
        &mut self.data[r * self.cols + c]
    }
}

/// AoI of every cached copy plus the MBS masters, and the popularity
/// weights the reward is evaluated with.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheState {
    /// `A^R[k][h]`; only entries inside RSU `k`'s coverage are meaningful.
    pub rsu_aoi: Grid<Aoi>,
    pub mbs_aoi: Vec<Aoi>,
    /// `p[k][h]`, zero outside coverage, each row sums to one.
    pub popularity: Grid<f64>,
}

impl CacheState {
    /// Every AoI set to `aoi` and popularity initialised from the config's
    /// popularity mode.
    pub fn uniform(cfg: &SystemConfig, aoi: Aoi) -> Self {
        Self {
            rsu_aoi: Grid::filled(cfg.num_rsus, cfg.num_regions, aoi),
            mbs_aoi: vec![aoi; cfg.num_regions],
            popularity: initial_popularity(cfg),
        }
    }

    /// Checks the AoI floor, freshness dominance and popularity normalisation.
    pub fn check(&self, cfg: &SystemConfig) -> Result<()> {
        if self.mbs_aoi.len() != cfg.num_regions {
            return Err(Error::LengthMismatch {
                expected: cfg.num_regions,
                actual: self.mbs_aoi.len(),
            });
        }
        for (k, h) in cfg.covered_pairs() {
            let a = self.rsu_aoi[(k, h)];
            if a < 1 || a < self.mbs_aoi[h] {
                return Err(Error::ConstraintViolation {
                    rsu: k,
                    reason: format!("cached AoI {a} of content {h} below floor or master"),
                });
            }
        }
        for k in 0..cfg.num_rsus {
            let sum: f64 = self.popularity.row(k).iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::ConstraintViolation {
                    rsu: k,
                    reason: format!("popularity sums to {sum}"),
                });
            }
        }
        Ok(())
    }
}

/// Zipf weights `(j + 1)^-s` over the local index `j` of each RSU's
/// contents, normalised per RSU. Empirical mode starts uniform.
pub fn initial_popularity(cfg: &SystemConfig) -> Grid<f64> {
    let exponent = match cfg.popularity_mode {
        PopularityMode::StaticZipf { exponent } => exponent,
        PopularityMode::Empirical { .. } => 0.0,
    };
    let weights = zipf_weights(cfg.regions_per_rsu, exponent);
    let mut grid = Grid::filled(cfg.num_rsus, cfg.num_regions, 0.0);
    for (k, h) in cfg.covered_pairs() {
        grid[(k, h)] = weights[h - k * cfg.regions_per_rsu];
    }
    grid
}

pub(crate) fn zipf_weights(n: usize, exponent: f64) -> Vec<f64> {
    let raw: Vec<f64> = (1..=n).map(|r| (r as f64).powf(-exponent)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

/// Binary refresh matrix `x[k][h]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UpdateAction {
    x: Grid<bool>,
}

impl UpdateAction {
    pub fn none(num_rsus: usize, num_regions: usize) -> Self {
        Self {
            x: Grid::filled(num_rsus, num_regions, false),
        }
    }

    pub fn for_config(cfg: &SystemConfig) -> Self {
        Self::none(cfg.num_rsus, cfg.num_regions)
    }

    pub fn from_rows(rows: Vec<Vec<bool>>) -> Result<Self> {
        Ok(Self {
            x: Grid::from_rows(rows)?,
        })
    }

    pub fn set(&mut self, rsu: usize, content: usize, refresh: bool) {
        self.x[(rsu, content)] = refresh;
    }

    pub fn get(&self, rsu: usize, content: usize) -> bool {
        self.x[(rsu, content)]
    }

    pub fn num_rsus(&self) -> usize {
        self.x.rows()
    }

    /// The content RSU `rsu` refreshes, if any. Assumes a legal action.
    pub fn refreshed(&self, rsu: usize) -> Option<usize> {
        self.x.row(rsu).iter().position(|&b| b)
    }

    pub fn count(&self) -> usize {
        (0..self.x.rows())
            .map(|k| self.x.row(k).iter().filter(|&&b| b).count())
            .sum()
    }

    /// At most one refresh per RSU, and only inside its coverage.
    pub fn check(&self, cfg: &SystemConfig) -> Result<()> {
        if self.x.rows() != cfg.num_rsus || self.x.cols() != cfg.num_regions {
            return Err(Error::LengthMismatch {
                expected: cfg.num_rsus * cfg.num_regions,
                actual: self.x.rows() * self.x.cols(),
            });
        }
        for k in 0..cfg.num_rsus {
            let cover = cfg.coverage_of(k)?;
            let mut set = 0;
            for (h, &b) in self.x.row(k).iter().enumerate() {
                if !b {
                    continue;
                }
                if !cover.contains(&h) {
                    return Err(Error::ConstraintViolation {
                        rsu: k,
                        reason: format!("refresh of content {h} outside coverage {cover:?}"),
                    });
                }
                set += 1;
            }
            if set > 1 {
                return Err(Error::ConstraintViolation {
                    rsu: k,
                    reason: format!("{set} refreshes in one slot"),
                });
            }
        }
        Ok(())
    }
}

/// Accumulated vehicle waiting at one RSU, in request-slots.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ServiceQueue {
    pub rsu_id: usize,
    pub backlog: f64,
}

impl ServiceQueue {
    pub fn empty(rsu_id: usize) -> Self {
        Self {
            rsu_id,
            backlog: 0.0,
        }
    }
}

/// A vehicle driving along the road with one outstanding content request.
#[derive(Debug, Clone, PartialEq)]
pub struct Uv {
    pub id: u64,
    /// Region coordinate in `[0, L)`.
    pub position: f64,
    pub requested_content: usize,
    pub wait_slots: u64,
    pub served: bool,
}

impl Uv {
    pub fn region(&self) -> usize {
        self.position as usize
    }
}

/// Metrics for one simulated slot.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct SlotTrace {
    pub slot: u64,
    /// Post-refresh AoI of every covered `(k, h)`, row-major by RSU then
    /// local content index.
    pub rsu_aoi_samples: Vec<Aoi>,
    pub reward: f64,
    pub aoi_utility: f64,
    pub mbs_cost: f64,
    pub cumulative_reward: f64,
    pub backlog: Vec<f64>,
    pub served: Vec<u32>,
    pub serving: Vec<bool>,
    /// Sum of cached AoIs per RSU.
    pub aoi_sum: Vec<u64>,
    pub served_count: u32,
    pub updates_issued: u32,
    pub service_cost: f64,
    pub requests_issued: u32,
    pub misses: u32,
    pub gate_blocked: u32,
    pub handoffs: u32,
    pub drops: u32,
    /// Unserved vehicles still on the road at the end of the slot.
    pub pending: u32,
}
