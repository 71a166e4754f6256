use alloc::vec::Vec;

use super::converged::plan_converged;
use super::{simulate, ChannelBudgets, ConvergedConfig, SchedError, SimReport};
use crate::catalog::Catalog;
use crate::num::ceil_fraction;
use crate::workload::{generate_trace, zipf_pmf, TraceConfig, ZipfParams};

/// Inputs of a users-per-cell search.
///
/// Trial `i` of a probe with `K` users runs the converged planner on the
/// trace generated from `trace` with `n_users = K` and seed
/// `trace.seed + i` (wrapping). Popularity is the Zipf law itself.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityProbe {
    pub catalog: Catalog,
    pub zipf: ZipfParams,
    /// Template; `n_users` is ignored.
    pub trace: TraceConfig,
    pub sched: ConvergedConfig,
    pub trials: usize,
    /// Largest population tried.
    pub k_max: usize,
    /// Share of trials in which every user must be satisfied.
    pub pass_fraction: f64,
}

impl CapacityProbe {
    pub const DEFAULT_PASS_FRACTION: f64 = 0.95;

    pub fn validate(&self) -> Result<(), SchedError> {
        if self.trials == 0 {
            return Err(SchedError::Config("at least one trial is required"));
        }
        if self.k_max == 0 || self.k_max > u32::MAX as usize {
            return Err(SchedError::Config("k_max must lie in 1..=2^32-1"));
        }
        if !(self.pass_fraction > 0.0 && self.pass_fraction <= 1.0) {
            return Err(SchedError::Config("pass fraction must lie in (0, 1]"));
        }
        self.sched.validate(self.trace.horizon_s)?;
        self.trace.validate()?;
        Ok(())
    }

    /// Trials that must have every user satisfied for `K` to count.
    pub fn required_passes(&self) -> usize {
        ceil_fraction(self.pass_fraction, self.trials).max(1)
    }

    pub fn trace_for(&self, k: usize, trial: usize) -> TraceConfig {
        TraceConfig { n_users: k, seed: self.trace.seed.wrapping_add(trial as u64), ..self.trace }
    }
}

/// Result of [`users_per_cell`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CapacityEstimate {
    pub k_supported: usize,
    /// Mean over trials at `k_supported` (zero when nothing is supported).
    pub mean_content_rate: f64,
    pub mean_unicast_bits: f64,
    /// `(K, passing trials)` in probe order.
    pub probes: Vec<(usize, usize)>,
}

/// Simulates trial `trial` of `probe` with `k` users.
pub fn trial_report(probe: &CapacityProbe, k: usize, trial: usize) -> Result<SimReport, SchedError> {
    let trace_cfg = probe.trace_for(k, trial);
    let requests = generate_trace(&probe.catalog, probe.zipf, &trace_cfg)?;
    let popularity = zipf_pmf(probe.zipf)?;
    let cfg = &probe.sched;
    let plan = plan_converged(&requests, &probe.catalog, &popularity, cfg, trace_cfg.horizon_s)?;
    let budgets = ChannelBudgets {
        broadcast_hz: cfg.broadcast_bw_hz,
        cellular_hz: cfg.cellular_bw_hz,
        link_rate_bps_per_hz: cfg.link_rate_bps_per_hz,
    };
    Ok(simulate(&plan, &requests, &probe.catalog, cfg.cache, budgets, trace_cfg.horizon_s)?)
}

/// Largest `K` in `1..=k_max` with `passes(K)`, assuming `passes` is
/// monotone (true up to some `K`, false after). Returns 0 if `passes(1)`
/// fails. Probes `1, 2, 4, …` and then bisects the last gap.
pub fn search_capacity<E>(
    k_max: usize,
    mut passes: impl FnMut(usize) -> Result<bool, E>,
) -> Result<usize, E> {
    if k_max == 0 || !passes(1)? {
        return Ok(0);
    }
    let mut lo = 1;
    let mut hi = loop {
        let next = (lo * 2).min(k_max);
        if next == lo {
            return Ok(lo);
        }
        if !passes(next)? {
            break next;
        }
        lo = next;
    };
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Largest number of users for which at least `pass_fraction` of the
/// seeded trials satisfy every user under the converged plan.
///
/// Traces are prefix-consistent in `K` and the push list does not depend on
/// `K`, so the per-trial outcome is monotone in `K` and the search is exact.
pub fn users_per_cell(probe: &CapacityProbe) -> Result<CapacityEstimate, SchedError> {
    probe.validate()?;
    let mut probes = Vec::new();
    let need = probe.required_passes();
    let k_supported = search_capacity(probe.k_max, |k| {
        let mut ok = 0;
        for trial in 0..probe.trials {
            if trial_report(probe, k, trial)?.all_satisfied() {
                ok += 1;
            }
        }
        probes.push((k, ok));
        Ok::<_, SchedError>(ok >= need)
    })?;

    let (mut rate, mut unicast) = (0.0, 0.0);
    if k_supported > 0 {
        for trial in 0..probe.trials {
            let rep = trial_report(probe, k_supported, trial)?;
            rate += rep.content_rate;
            unicast += rep.unicast_bits as f64;
        }
        rate /= probe.trials as f64;
        unicast /= probe.trials as f64;
    }
    Ok(CapacityEstimate { k_supported, mean_content_rate: rate, mean_unicast_bits: unicast, probes })
}
