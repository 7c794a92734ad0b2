//! Single-content refresh MDP and its value-iteration solver.
//!
//! The slot reward is additively separable over `(rsu, content)` pairs, so
//! each cached copy gets its own two-action MDP over AoI states
//! `1..=aoi_cap`. Refreshing moves the copy to AoI 1 and pays the refresh
//! cost; holding ages it by one slot, saturating at `aoi_cap`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Aoi;

pub const DEFAULT_DISCOUNT: f64 = 0.9;
pub const DEFAULT_EPSILON: f64 = 1e-6;
const MAX_ITERATIONS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheAction {
    Hold,
    Refresh,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContentMdp {
    pub max_aoi: Aoi,
    pub popularity: f64,
    pub cost: f64,
    pub weight: f64,
    pub discount: f64,
    pub aoi_cap: Aoi,
}

impl ContentMdp {
    /// Default discount and a state cap of twice the AoI limit.
    pub fn new(max_aoi: Aoi, popularity: f64, cost: f64, weight: f64) -> Self {
        Self {
            max_aoi,
            popularity,
            cost,
            weight,
            discount: DEFAULT_DISCOUNT,
            aoi_cap: max_aoi.saturating_mul(2),
        }
    }

    pub fn with_discount(mut self, discount: f64) -> Self {
        self.discount = discount;
        self
    }

    pub fn with_cap(mut self, aoi_cap: Aoi) -> Self {
        self.aoi_cap = aoi_cap;
        self
    }

    pub fn num_states(&self) -> usize {
        self.aoi_cap as usize
    }

    /// AoI after taking `action` in state `aoi`.
    pub fn next_state(&self, aoi: Aoi, action: CacheAction) -> Aoi {
        match action {
            CacheAction::Refresh => 1,
            CacheAction::Hold => (aoi + 1).min(self.aoi_cap),
        }
    }

    /// `w * p * A^max / a' - cost * [refresh]`, with `a'` the post-action AoI.
    pub fn reward(&self, aoi: Aoi, action: CacheAction) -> f64 {
        let post = self.next_state(aoi, action);
        let utility = self.weight * self.popularity * f64::from(self.max_aoi) / f64::from(post);
        match action {
            CacheAction::Refresh => utility - self.cost,
            CacheAction::Hold => utility,
        }
    }

    fn validate(&self, epsilon: f64) -> Result<()> {
        if !(0.0..1.0).contains(&self.discount) {
            return Err(Error::BadDiscount(self.discount));
        }
        if epsilon.is_nan() || epsilon <= 0.0 {
            return Err(Error::BadEpsilon(epsilon));
        }
        if self.max_aoi < 1 {
            return Err(Error::NonPositiveLimit("content MDP max_aoi < 1".into()));
        }
        if self.aoi_cap < self.max_aoi {
            return Err(Error::BadStateSpace {
                cap: self.aoi_cap,
                max_aoi: self.max_aoi,
            });
        }
        Ok(())
    }
}

/// Solved values and greedy policy, indexed by `aoi - 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvedMdp {
    pub values: Vec<f64>,
    pub policy: Vec<CacheAction>,
    /// `Q(refresh) - Q(hold)` per state.
    pub gap: Vec<f64>,
    pub iterations: usize,
}

impl SolvedMdp {
    fn index(&self, aoi: Aoi) -> usize {
        (aoi.max(1) as usize).min(self.values.len()) - 1
    }

    /// Refresh advantage at `aoi`; states past the cap use the cap.
    pub fn advantage(&self, aoi: Aoi) -> f64 {
        self.gap[self.index(aoi)]
    }

    pub fn action(&self, aoi: Aoi) -> CacheAction {
        self.policy[self.index(aoi)]
    }

    pub fn value(&self, aoi: Aoi) -> f64 {
        self.values[self.index(aoi)]
    }

    /// Smallest AoI at which the greedy policy refreshes.
    pub fn refresh_threshold(&self) -> Option<Aoi> {
        self.policy
            .iter()
            .position(|&a| a == CacheAction::Refresh)
            .map(|i| i as Aoi + 1)
    }
}

fn action_values(mdp: &ContentMdp, values: &[f64], aoi: Aoi) -> (f64, f64) {
    let q = |action| {
        let next = mdp.next_state(aoi, action);
        mdp.reward(aoi, action) + mdp.discount * values[next as usize - 1]
    };
    (q(CacheAction::Hold), q(CacheAction::Refresh))
}

/// Discounted value iteration, stopped once the sup-norm update falls below
/// `epsilon * (1 - discount) / (2 * discount)`. The returned values are
/// then within `epsilon / 2` of optimal and the greedy policy is
/// `epsilon`-optimal. Ties go to hold.
pub fn solve_content_mdp(mdp: &ContentMdp, epsilon: f64) -> Result<SolvedMdp> {
    mdp.validate(epsilon)?;
    let n = mdp.num_states();
    let gamma = mdp.discount;
    let tolerance = if gamma > 0.0 {
        epsilon * (1.0 - gamma) / (2.0 * gamma)
    } else {
        f64::INFINITY
    };

    let mut values = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut iterations = 0;
    loop {
        iterations += 1;
        let mut delta: f64 = 0.0;
        for (i, slot) in next.iter_mut().enumerate() {
            let (hold, refresh) = action_values(mdp, &values, i as Aoi + 1);
            *slot = hold.max(refresh);
            delta = delta.max((*slot - values[i]).abs());
        }
        std::mem::swap(&mut values, &mut next);
        if delta < tolerance || iterations >= MAX_ITERATIONS {
            break;
        }
    }

    let mut policy = Vec::with_capacity(n);
    let mut gap = Vec::with_capacity(n);
    for i in 0..n {
        let (hold, refresh) = action_values(mdp, &values, i as Aoi + 1);
        gap.push(refresh - hold);
        policy.push(if refresh > hold {
            CacheAction::Refresh
        } else {
            CacheAction::Hold
        });
    }
    Ok(SolvedMdp {
        values,
        policy,
        gap,
        iterations,
    })
}
