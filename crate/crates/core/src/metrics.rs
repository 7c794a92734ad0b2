//! Trace CSV persistence and run summaries.
//!
//! CSV columns: `slot, reward, aoi_utility, mbs_cost, cumulative_reward,
//! updates_issued`, then `aoi_<k>_<j>` for every RSU `k` and local content
//! index `j`, then `q_<k>, served_<k>` for every RSU. Floats are written in
//! shortest round-trip form, rows end in LF.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::model::{Aoi, SlotTrace};

pub const FIXED_COLUMNS: [&str; 6] = [
    "slot",
    "reward",
    "aoi_utility",
    "mbs_cost",
    "cumulative_reward",
    "updates_issued",
];

pub fn trace_header(cfg: &SystemConfig) -> Vec<String> {
    let mut cols: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    for k in 0..cfg.num_rsus {
        for j in 0..cfg.regions_per_rsu {
            cols.push(format!("aoi_{k}_{j}"));
        }
    }
    for k in 0..cfg.num_rsus {
        cols.push(format!("q_{k}"));
        cols.push(format!("served_{k}"));
    }
    cols
}

/// The subset of a [`SlotTrace`] that the CSV carries.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub slot: u64,
    pub reward: f64,
    pub aoi_utility: f64,
    pub mbs_cost: f64,
    pub cumulative_reward: f64,
    pub updates_issued: u32,
    pub aoi: Vec<Aoi>,
    pub backlog: Vec<f64>,
    pub served: Vec<u32>,
}

impl From<&SlotTrace> for TraceRow {
    fn from(t: &SlotTrace) -> Self {
        Self {
            slot: t.slot,
            reward: t.reward,
            aoi_utility: t.aoi_utility,
            mbs_cost: t.mbs_cost,
            cumulative_reward: t.cumulative_reward,
            updates_issued: t.updates_issued,
            aoi: t.rsu_aoi_samples.clone(),
            backlog: t.backlog.clone(),
            served: t.served.clone(),
        }
    }
}

pub fn write_traces_to<W: Write>(traces: &[SlotTrace], cfg: &SystemConfig, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(trace_header(cfg))?;
    let mut record: Vec<String> = Vec::new();
    for t in traces {
        record.clear();
        record.push(t.slot.to_string());
        record.push(t.reward.to_string());
        record.push(t.aoi_utility.to_string());
        record.push(t.mbs_cost.to_string());
        record.push(t.cumulative_reward.to_string());
        record.push(t.updates_issued.to_string());
        record.extend(t.rsu_aoi_samples.iter().map(ToString::to_string));
        for (q, s) in t.backlog.iter().zip(&t.served) {
            record.push(q.to_string());
            record.push(s.to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_traces(
    traces: &[SlotTrace],
    cfg: &SystemConfig,
    path: impl AsRef<Path>,
) -> Result<()> {
    let file = File::create(path)?;
    write_traces_to(traces, cfg, BufWriter::new(file))
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T> {
    rec.get(i).and_then(|s| s.parse().ok()).ok_or_else(|| {
        Error::Io(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("bad field {i}"),
        ))
    })
}

/// Parses a trace CSV written by [`write_traces`] for the same layout.
pub fn read_traces<R: Read>(input: R, cfg: &SystemConfig) -> Result<Vec<TraceRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(String::from).collect();
    if header != trace_header(cfg) {
        return Err(Error::LengthMismatch {
            expected: trace_header(cfg).len(),
            actual: header.len(),
        });
    }
    let tracked = cfg.num_rsus * cfg.regions_per_rsu;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let base = FIXED_COLUMNS.len();
        let aoi = (0..tracked)
            .map(|i| field(&rec, base + i))
            .collect::<Result<_>>()?;
        let queues = base + tracked;
        let backlog = (0..cfg.num_rsus)
            .map(|k| field(&rec, queues + 2 * k))
            .collect::<Result<_>>()?;
        let served = (0..cfg.num_rsus)
            .map(|k| field(&rec, queues + 2 * k + 1))
            .collect::<Result<_>>()?;
        rows.push(TraceRow {
            slot: field(&rec, 0)?,
            reward: field(&rec, 1)?,
            aoi_utility: field(&rec, 2)?,
            mbs_cost: field(&rec, 3)?,
            cumulative_reward: field(&rec, 4)?,
            updates_issued: field(&rec, 5)?,
            aoi,
            backlog,
            served,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContentAoiStats {
    pub rsu: usize,
    pub content: usize,
    pub mean: f64,
    pub max: Aoi,
    pub max_aoi: Aoi,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub slots: usize,
    pub mean_backlog: Vec<f64>,
    pub max_backlog: Vec<f64>,
    pub time_avg_mbs_cost: f64,
    pub time_avg_service_cost: f64,
    pub time_avg_reward: f64,
    pub final_cumulative_reward: f64,
    pub content_aoi: Vec<ContentAoiStats>,
    pub requests_issued: u64,
    pub requests_served: u64,
    pub drop_count: u64,
    /// `(slot, rsu, content)` samples above the content's AoI limit.
    pub constraint_violations: u64,
    pub config_digest: String,
    pub seed: u64,
}

/// SHA-256 of the compact JSON form of `cfg`.
pub fn config_digest(cfg: &SystemConfig) -> String {
    let bytes = serde_json::to_vec(cfg).expect("config serializes");
    hex::encode(Sha256::digest(&bytes))
}

pub fn summarize(traces: &[SlotTrace], cfg: &SystemConfig) -> Result<RunSummary> {
    if traces.is_empty() {
        return Err(Error::EmptyTraces);
    }
    let n = traces.len() as f64;
    let mean = |f: &dyn Fn(&SlotTrace) -> f64| traces.iter().map(f).sum::<f64>() / n;

    let mut mean_backlog = Vec::with_capacity(cfg.num_rsus);
    let mut max_backlog = Vec::with_capacity(cfg.num_rsus);
    for k in 0..cfg.num_rsus {
        mean_backlog.push(mean(&|t| t.backlog[k]));
        max_backlog.push(
            traces
                .iter()
                .map(|t| t.backlog[k])
                .fold(f64::NEG_INFINITY, f64::max),
        );
    }

    let mut content_aoi = Vec::new();
    let mut violations = 0;
    for (i, (k, h)) in cfg.covered_pairs().enumerate() {
        let limit = cfg.max_aoi[h];
        let mut max = 0;
        for t in traces {
            let a = t.rsu_aoi_samples[i];
            max = max.max(a);
            if a > limit {
                violations += 1;
            }
        }
        content_aoi.push(ContentAoiStats {
            rsu: k,
            content: h,
            mean: mean(&|t| f64::from(t.rsu_aoi_samples[i])),
            max,
            max_aoi: limit,
        });
    }

    Ok(RunSummary {
        slots: traces.len(),
        mean_backlog,
        max_backlog,
        time_avg_mbs_cost: mean(&|t| t.mbs_cost),
        time_avg_service_cost: mean(&|t| t.service_cost),
        time_avg_reward: mean(&|t| t.reward),
        final_cumulative_reward: traces.last().map_or(0.0, |t| t.cumulative_reward),
        content_aoi,
        requests_issued: traces.iter().map(|t| u64::from(t.requests_issued)).sum(),
        requests_served: traces.iter().map(|t| u64::from(t.served_count)).sum(),
        drop_count: traces.iter().map(|t| u64::from(t.drops)).sum(),
        constraint_violations: violations,
        config_digest: config_digest(cfg),
        seed: cfg.seed,
    })
}
