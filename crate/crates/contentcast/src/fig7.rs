//! Users-per-cell curves against broadcast bandwidth, one per Zipf exponent,
//! with the cellular-only baseline alongside.

use std::io::Write;
use std::path::PathBuf;

use contentcast_core::sched::CapacityProbe;
use contentcast_core::ConvergedConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::experiment::{default_sweep_sched, WorkloadSpec};
use crate::scenario::csv_writer;
use crate::sweep::{run_sweep, Knob, SweepRow, Vary};

fn default_s() -> Vec<f64> {
    vec![0.5, 1.0]
}

fn default_b_broadcast() -> Vec<f64> {
    (0..=5).map(|i| 20.0 * i as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fig7Config {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_s")]
    pub s: Vec<f64>,
    /// Broadcast bandwidths in Hz; `0` is added if missing.
    #[serde(default = "default_b_broadcast")]
    pub b_broadcast_hz: Vec<f64>,
    #[serde(default)]
    pub workload: WorkloadSpec,
    /// `broadcast_bw_hz` is overridden per point.
    #[serde(default = "default_sweep_sched")]
    pub sched: ConvergedConfig,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_pass_fraction")]
    pub pass_fraction: f64,
    /// CSV destination when the command line gives none.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_trials() -> usize {
    100
}

fn default_k_max() -> usize {
    10_000
}

fn default_pass_fraction() -> f64 {
    CapacityProbe::DEFAULT_PASS_FRACTION
}

impl Default for Fig7Config {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all fields have defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig7Row {
    #[serde(flatten)]
    pub point: SweepRow,
    pub k_baseline: usize,
    /// `K / K_baseline`; `None` when the baseline supports nobody.
    pub gain: Option<f64>,
}

impl Fig7Row {
    fn gain_text(&self) -> String {
        match self.gain {
            Some(g) => g.to_string(),
            None if self.point.k_supported > 0 => "inf".into(),
            None => "nan".into(),
        }
    }
}

/// Broadcast bandwidths with `0` first, in config order otherwise.
fn b_values(cfg: &Fig7Config) -> Vec<f64> {
    let mut b = cfg.b_broadcast_hz.clone();
    if !b.contains(&0.0) {
        b.insert(0, 0.0);
    }
    b
}

pub fn fig7_rows(cfg: &Fig7Config) -> Result<Vec<Fig7Row>> {
    if cfg.s.is_empty() {
        return Err(CliError::config("s must list at least one exponent"));
    }
    if cfg.b_broadcast_hz.iter().any(|b| !(b.is_finite() && *b >= 0.0)) {
        return Err(CliError::config("broadcast bandwidths must be finite and non-negative"));
    }
    let vary = Vary { knob: Knob::BroadcastHz, values: b_values(cfg) };
    let probe = cfg.workload.probe(cfg.sched, cfg.seed, cfg.trials, cfg.k_max, cfg.pass_fraction)?;
    let points = run_sweep(&probe, &vary, &cfg.s)?;
    let per_s = vary.values.len();
    let rows = points
        .chunks(per_s)
        .flat_map(|curve| {
            let base = curve.iter().find(|r| r.b_broadcast_hz == 0.0).map_or(0, |r| r.k_supported);
            curve.iter().map(move |r| Fig7Row {
                point: r.clone(),
                k_baseline: base,
                gain: (base > 0).then(|| r.k_supported as f64 / base as f64),
            })
        })
        .collect();
    Ok(rows)
}

pub const FIG7_COLUMNS: [&str; 9] =
    ["s", "B_b", "B_c", "M", "K_supported", "K_baseline", "gain", "mean_content_rate", "mean_unicast_bits"];

pub fn write_fig7_csv<W: Write>(rows: &[Fig7Row], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    let fail = |e: csv::Error| CliError::Invariant(e.to_string());
    out.write_record(FIG7_COLUMNS).map_err(fail)?;
    for r in rows {
        let p = &r.point;
        out.write_record([
            p.s.to_string(),
            p.b_broadcast_hz.to_string(),
            p.b_cellular_hz.to_string(),
            p.cache_bits.to_string(),
            p.k_supported.to_string(),
            r.k_baseline.to_string(),
            r.gain_text(),
            p.mean_content_rate.to_string(),
            p.mean_unicast_bits.to_string(),
        ])
        .map_err(fail)?;
    }
    out.flush().map_err(|e| CliError::Invariant(e.to_string()))
}
