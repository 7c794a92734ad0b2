//! Sliding-window request frequencies per RSU.

use std::collections::VecDeque;

use crate::config::SystemConfig;

/// Counts requests per content over the last `window` slots. Estimates are
/// add-one smoothed so every covered content keeps positive weight and each
/// RSU row sums to one.
#[derive(Debug, Clone)]
pub struct PopularityTracker {
    window: usize,
    per_rsu: usize,
    history: VecDeque<Vec<u32>>,
    current: Vec<u32>,
    totals: Vec<u64>,
}

impl PopularityTracker {
    pub fn new(cfg: &SystemConfig, window: usize) -> Self {
        Self {
            window: window.max(1),
            per_rsu: cfg.regions_per_rsu,
            history: VecDeque::with_capacity(window),
            current: vec![0; cfg.num_regions],
            totals: vec![0; cfg.num_regions],
        }
    }

    pub fn record(&mut self, content: usize) {
        self.current[content] += 1;
        self.totals[content] += 1;
    }

    /// Closes the current slot and forgets anything older than the window.
    pub fn end_slot(&mut self) {
        let done = std::mem::replace(&mut self.current, vec![0; self.totals.len()]);
        self.history.push_back(done);
        while self.history.len() > self.window {
            if let Some(old) = self.history.pop_front() {
                for (t, c) in self.totals.iter_mut().zip(old) {
                    *t -= u64::from(c);
                }
            }
        }
    }

    /// Smoothed popularity of RSU `rsu`'s covered contents, local order.
    pub fn row(&self, rsu: usize) -> Vec<f64> {
        let start = rsu * self.per_rsu;
        let counts = &self.totals[start..start + self.per_rsu];
        let total: u64 = counts.iter().sum();
        let denom = total as f64 + self.per_rsu as f64;
        counts.iter().map(|&c| (c as f64 + 1.0) / denom).collect()
    }
}
