//! Per-RSU service control via drift-plus-penalty, with the backlog queue
//! and the AoI admissibility gate.
//!
//! Each slot an RSU either serves or idles. Serving costs `service_cost`
//! and drains `service_rate` request-slots of backlog; idling is free and
//! drains nothing. The RSU picks the action minimising
//! `V * C(alpha) - Q * b(alpha)`, which reduces to serving iff
//! `Q > V * service_cost / service_rate`.

use serde::Serialize;

use crate::config::{ServicePolicy, SystemConfig};
use crate::error::{Error, Result};
use crate::model::{CacheState, ServiceQueue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Alpha {
    Serve,
    Idle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ServiceDecision {
    pub alpha: Alpha,
    pub objective_serve: f64,
    pub objective_idle: f64,
}

impl ServiceDecision {
    fn evaluate(q: &ServiceQueue, cfg: &SystemConfig) -> (f64, f64) {
        let serve = cfg.lyapunov_v * cfg.service_cost - q.backlog * cfg.service_rate;
        (serve, 0.0)
    }

    fn with(alpha: Alpha, q: &ServiceQueue, cfg: &SystemConfig) -> Self {
        let (objective_serve, objective_idle) = Self::evaluate(q, cfg);
        Self {
            alpha,
            objective_serve,
            objective_idle,
        }
    }

    pub fn serves(&self) -> bool {
        self.alpha == Alpha::Serve
    }

    /// Backlog drained by this decision.
    pub fn departure(&self, cfg: &SystemConfig) -> f64 {
        if self.serves() {
            cfg.service_rate
        } else {
            0.0
        }
    }

    pub fn cost(&self, cfg: &SystemConfig) -> f64 {
        if self.serves() {
            cfg.service_cost
        } else {
            0.0
        }
    }
}

/// Drift-plus-penalty minimiser; idles on an exact tie.
pub fn decide_service(q: &ServiceQueue, cfg: &SystemConfig) -> ServiceDecision {
    let (serve, idle) = ServiceDecision::evaluate(q, cfg);
    let alpha = if serve < idle {
        Alpha::Serve
    } else {
        Alpha::Idle
    };
    ServiceDecision::with(alpha, q, cfg)
}

/// `max(Q - b(alpha), 0) + arrivals`.
pub fn queue_step(
    q: &ServiceQueue,
    arrivals: f64,
    decision: &ServiceDecision,
    cfg: &SystemConfig,
) -> Result<ServiceQueue> {
    if arrivals.is_nan() || arrivals < 0.0 {
        return Err(Error::NegativeArrivals(arrivals));
    }
    Ok(ServiceQueue {
        rsu_id: q.rsu_id,
        backlog: (q.backlog - decision.departure(cfg)).max(0.0) + arrivals,
    })
}

/// Whether `content`'s cached copy at `rsu` is still within its AoI limit.
pub fn aoi_admissible(
    rsu: usize,
    content: usize,
    state: &CacheState,
    cfg: &SystemConfig,
) -> Result<bool> {
    if !cfg.coverage_of(rsu)?.contains(&content) {
        return Err(Error::OutOfCoverage { rsu, content });
    }
    Ok(state.rsu_aoi[(rsu, content)] <= cfg.max_aoi[content])
}

/// Fixed-rule service comparators. `slot` is the 1-based slot number.
pub fn service_baseline(
    kind: ServicePolicy,
    q: &ServiceQueue,
    slot: u64,
    cfg: &SystemConfig,
) -> Result<ServiceDecision> {
    let busy = q.backlog > 0.0;
    let serve = match kind {
        ServicePolicy::AlwaysServe => busy,
        ServicePolicy::Periodic { period } => {
            if period < 1 {
                return Err(Error::BadPeriod(period));
            }
            busy && slot.is_multiple_of(period)
        }
        ServicePolicy::Lyapunov => return Err(Error::UnknownKind("lyapunov".into())),
    };
    let alpha = if serve { Alpha::Serve } else { Alpha::Idle };
    Ok(ServiceDecision::with(alpha, q, cfg))
}

/// Decision under the configured service policy.
pub fn service_decision(
    q: &ServiceQueue,
    slot: u64,
    cfg: &SystemConfig,
) -> Result<ServiceDecision> {
    match cfg.service_policy {
        ServicePolicy::Lyapunov => Ok(decide_service(q, cfg)),
        other => service_baseline(other, q, slot, cfg),
    }
}
