//! Parallel users-per-cell sweeps.
//!
//! Trials of one probe and points of one sweep run on a rayon pool, but
//! results are collected in trial and point order, so output never depends
//! on scheduling.

use std::io::Write;

use contentcast_core::sched::{
    search_capacity, trial_report, CapacityEstimate, CapacityProbe, SchedError,
};
use contentcast_core::CacheSpec;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::scenario::csv_writer;

pub const THREADS_ENV: &str = "CONTENTCAST_THREADS";

/// Pool sized by `CONTENTCAST_THREADS` (unset or 0 = one per core).
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<usize>()
            .map_err(|_| CliError::config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}")))?,
        Err(_) => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Invariant(e.to_string()))
}

/// Same result as [`contentcast_core::sched::users_per_cell`], with the
/// trials of each probe evaluated in parallel.
pub fn users_per_cell_par(probe: &CapacityProbe) -> std::result::Result<CapacityEstimate, SchedError> {
    probe.validate()?;
    let need = probe.required_passes();
    let run = |k: usize| -> std::result::Result<Vec<_>, SchedError> {
        (0..probe.trials).into_par_iter().map(|t| trial_report(probe, k, t)).collect()
    };
    let mut probes = Vec::new();
    let k_supported = search_capacity(probe.k_max, |k| {
        let ok = run(k)?.iter().filter(|r| r.all_satisfied()).count();
        probes.push((k, ok));
        Ok::<_, SchedError>(ok >= need)
    })?;
    let (mut rate, mut unicast) = (0.0, 0.0);
    if k_supported > 0 {
        for rep in run(k_supported)? {
            rate += rep.content_rate;
            unicast += rep.unicast_bits as f64;
        }
        rate /= probe.trials as f64;
        unicast /= probe.trials as f64;
    }
    Ok(CapacityEstimate { k_supported, mean_content_rate: rate, mean_unicast_bits: unicast, probes })
}

/// Configuration knob a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Knob {
    BroadcastHz,
    CellularHz,
    CacheBits,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Vary {
    pub knob: Knob,
    pub values: Vec<f64>,
}

impl Vary {
    /// Parses `name=start:step:stop` (inclusive) or `name=v1,v2,...`, with
    /// `name` one of `b_broadcast`, `b_cellular`, `cache_bits`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |why: &str| CliError::config(format!("--vary {text:?}: {why}"));
        let (name, range) = text.split_once('=').ok_or_else(|| bad("expected name=range"))?;
        let knob = match name.trim() {
            "b_broadcast" => Knob::BroadcastHz,
            "b_cellular" => Knob::CellularHz,
            "cache_bits" => Knob::CacheBits,
            _ => return Err(bad("name must be b_broadcast, b_cellular or cache_bits")),
        };
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| bad("values must be finite non-negative numbers"))
        };
        let values = if range.contains(':') {
            let parts: Vec<&str> = range.split(':').collect();
            let [start, step, stop] = parts[..] else {
                return Err(bad("range must be start:step:stop"));
            };
            let (start, step, stop) = (num(start)?, num(step)?, num(stop)?);
            if step <= 0.0 || stop < start {
                return Err(bad("range needs step > 0 and stop >= start"));
            }
            let n = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=n).map(|i| start + i as f64 * step).collect()
        } else {
            range.split(',').map(num).collect::<Result<Vec<_>>>()?
        };
        if values.is_empty() {
            return Err(bad("no values"));
        }
        if knob == Knob::CacheBits && values.iter().any(|v| v.fract() != 0.0) {
            return Err(bad("cache sizes must be whole bits"));
        }
        Ok(Self { knob, values })
    }

    pub fn apply(&self, probe: &mut CapacityProbe, value: f64) {
        match self.knob {
            Knob::BroadcastHz => probe.sched.broadcast_bw_hz = value,
            Knob::CellularHz => probe.sched.cellular_bw_hz = value,
            Knob::CacheBits => probe.sched.cache = CacheSpec::Finite(value as u64),
        }
    }
}

/// One row of a sweep CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub s: f64,
    pub b_broadcast_hz: f64,
    pub b_cellular_hz: f64,
    pub cache_bits: CacheSpec,
    pub k_supported: usize,
    pub mean_content_rate: f64,
    pub mean_unicast_bits: f64,
}

impl SweepRow {
    fn new(probe: &CapacityProbe, est: &CapacityEstimate) -> Self {
        Self {
            s: probe.zipf.exponent_s,
            b_broadcast_hz: probe.sched.broadcast_bw_hz,
            b_cellular_hz: probe.sched.cellular_bw_hz,
            cache_bits: probe.sched.cache,
            k_supported: est.k_supported,
            mean_content_rate: est.mean_content_rate,
            mean_unicast_bits: est.mean_unicast_bits,
        }
    }
}

/// Capacity at every `(s, value)` point, `s` outermost, in input order.
pub fn run_sweep(base: &CapacityProbe, vary: &Vary, s_values: &[f64]) -> Result<Vec<SweepRow>> {
    let points: Vec<CapacityProbe> = s_values
        .iter()
        .flat_map(|&s| {
            vary.values.iter().map(move |&v| {
                let mut p = base.clone();
                p.zipf.exponent_s = s;
                vary.apply(&mut p, v);
                p
            })
        })
        .collect();
    let pool = thread_pool()?;
    pool.install(|| {
        points
            .par_iter()
            .map(|p| Ok(SweepRow::new(p, &users_per_cell_par(p)?)))
            .collect()
    })
}

pub const SWEEP_COLUMNS: [&str; 7] =
    ["s", "B_b", "B_c", "M", "K_supported", "mean_content_rate", "mean_unicast_bits"];

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    let fail = |e: csv::Error| CliError::Invariant(e.to_string());
    out.write_record(SWEEP_COLUMNS).map_err(fail)?;
    for r in rows {
        out.write_record([
            r.s.to_string(),
            r.b_broadcast_hz.to_string(),
            r.b_cellular_hz.to_string(),
            r.cache_bits.to_string(),
            r.k_supported.to_string(),
            r.mean_content_rate.to_string(),
            r.mean_unicast_bits.to_string(),
        ])
        .map_err(fail)?;
    }
    out.flush().map_err(|e| CliError::Invariant(e.to_string()))
}
