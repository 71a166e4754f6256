//! Experiment configs: one optional scenario run plus one optional sweep.
//!
//! ```json
//! {
//!   "seed": 7,
//!   "workload": {"n_items": 200, "zipf_s": 1.0},
//!   "sched": {"broadcast_bw_hz": 0.0, "cellular_bw_hz": 50.0, "push_period_s": 10.0},
//!   "sweep": {"vary": "b_broadcast=0:20:60", "s": [1.0], "trials": 100},
//!   "output": {"report": "out/report.json", "csv": "out/sweep.csv"}
//! }
//! ```
//!
//! Relative paths are resolved against the directory holding the config.

use std::path::{Path, PathBuf};

use contentcast_core::sched::CapacityProbe;
use contentcast_core::workload::{generate_catalog, TraceConfig, ZipfParams};
use contentcast_core::ConvergedConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::files;
use crate::scenario::{write_report_csv, Scenario, ScenarioReport};
use crate::sim::{default_converged, run_planner, Planner};
use crate::sweep::{run_sweep, write_sweep_csv, SweepRow, Vary};

/// Synthetic Zipf workload shared by sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WorkloadSpec {
    pub n_items: usize,
    pub size_bits: u64,
    pub objects_per_request: usize,
    pub requests_per_user: usize,
    pub horizon_s: f64,
    /// Requests fall in `(earliest_request_s, horizon_s]`.
    pub earliest_request_s: f64,
    pub zipf_s: f64,
}

impl Default for WorkloadSpec {
    fn default() -> Self {
        Self {
            n_items: 200,
            size_bits: 100,
            objects_per_request: 1,
            requests_per_user: 1,
            horizon_s: 100.0,
            earliest_request_s: 50.0,
            zipf_s: 1.0,
        }
    }
}

impl WorkloadSpec {
    /// Capacity probe for this workload; `s` comes from `zipf_s`.
    pub fn probe(&self, sched: ConvergedConfig, seed: u64, trials: usize, k_max: usize, pass_fraction: f64) -> Result<CapacityProbe> {
        let probe = CapacityProbe {
            catalog: generate_catalog(self.n_items, self.size_bits)?,
            zipf: ZipfParams { exponent_s: self.zipf_s, n_items: self.n_items },
            trace: TraceConfig {
                n_users: 1,
                horizon_s: self.horizon_s,
                requests_per_user: self.requests_per_user,
                objects_per_request: self.objects_per_request,
                seed,
                earliest_request_s: self.earliest_request_s,
            },
            sched,
            trials,
            k_max,
            pass_fraction,
        };
        probe.zipf.validate()?;
        probe.validate()?;
        Ok(probe)
    }
}

/// Converged settings sweeps start from: 50 Hz cellular, 10 s push period,
/// no broadcast.
pub fn default_sweep_sched() -> ConvergedConfig {
    ConvergedConfig { cellular_bw_hz: 50.0, push_period_s: 10.0, ..ConvergedConfig::default() }
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

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// `knob=start:step:stop` or `knob=v1,v2,...`.
    pub vary: String,
    /// Zipf exponents, outer loop. Defaults to the workload's.
    #[serde(default)]
    pub s: Vec<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "default_pass_fraction")]
    pub pass_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub report: PathBuf,
    pub csv: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    /// Scenario file run through the converged planner.
    #[serde(default)]
    pub scenario: Option<PathBuf>,
    #[serde(default)]
    pub workload: WorkloadSpec,
    /// Defaults to [`default_sweep_sched`] for the sweep and to the
    /// scenario's own budget for the scenario run.
    #[serde(default)]
    pub sched: Option<ConvergedConfig>,
    #[serde(default)]
    pub sweep: Option<SweepSpec>,
    pub output: OutputSpec,
}

/// Contents of the report JSON.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scenario: Option<ScenarioReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Vec<SweepRow>>,
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

impl ExperimentConfig {
    /// Reads a config and resolves its relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let mut cfg: Self = files::read_json(path)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.scenario = cfg.scenario.map(|p| resolve(base, &p));
        cfg.output.report = resolve(base, &cfg.output.report);
        cfg.output.csv = resolve(base, &cfg.output.csv);
        Ok(cfg)
    }

    pub fn sweep_sched(&self) -> ConvergedConfig {
        self.sched.unwrap_or_else(default_sweep_sched)
    }

    /// Schema checks that need no file access.
    pub fn validate(&self) -> Result<()> {
        if self.scenario.is_none() && self.sweep.is_none() {
            return Err(CliError::config("config needs a scenario, a sweep or both"));
        }
        if let Some(sw) = &self.sweep {
            Vary::parse(&sw.vary)?;
            if sw.s.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                return Err(CliError::config("sweep.s values must be finite and non-negative"));
            }
            self.workload.probe(self.sweep_sched(), self.seed, sw.trials, sw.k_max, sw.pass_fraction)?;
        }
        Ok(())
    }
}

/// Runs everything `cfg` asks for and writes the report and CSV.
///
/// The CSV holds the sweep rows when there is a sweep, else the scenario
/// report row.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    cfg.validate()?;
    let scenario = match &cfg.scenario {
        Some(path) => {
            let sc = Scenario::load(path)?;
            let id = path.file_stem().map_or("scenario".into(), |s| s.to_string_lossy().into_owned());
            let sched = cfg.sched.unwrap_or_else(|| default_converged(&sc));
            Some(run_planner(&id, &sc, Planner::Converged, &sched)?.1)
        }
        None => None,
    };
    let sweep = match &cfg.sweep {
        Some(sw) => {
            let vary = Vary::parse(&sw.vary)?;
            let s = if sw.s.is_empty() { vec![cfg.workload.zipf_s] } else { sw.s.clone() };
            let probe = cfg.workload.probe(cfg.sweep_sched(), cfg.seed, sw.trials, sw.k_max, sw.pass_fraction)?;
            Some(run_sweep(&probe, &vary, &s)?)
        }
        None => None,
    };
    let report = ExperimentReport { seed: cfg.seed, scenario, sweep };
    let mut csv = Vec::new();
    match (&report.sweep, &report.scenario) {
        (Some(rows), _) => write_sweep_csv(rows, &mut csv)?,
        (None, Some(sc)) => write_report_csv(std::slice::from_ref(sc), &mut csv)?,
        (None, None) => unreachable!("validated above"),
    }
    files::write_json(&cfg.output.report, &report)?;
    files::write_bytes(&cfg.output.csv, &csv)?;
    Ok(report)
}
