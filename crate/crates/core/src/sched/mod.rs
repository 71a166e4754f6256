//! Delivery planners and the plan simulator.
//!
//! Three planners produce [`DeliveryPlan`]s:
//!
//! - [`plan_unicast`]: every package over the cellular channel, no caching.
//! - [`plan_broadcast_all`]: the whole catalog broadcast once and cached.
//! - [`plan_converged`]: a popularity-ordered pushing list broadcast every
//!   push period and cached, with cellular unicast for whatever the cache
//!   does not cover by the request time.
//!
//! [`simulate`] replays a plan against split broadcast/cellular budgets and
//! [`users_per_cell`] searches the largest user population a configuration
//! serves.

use thiserror::Error;

mod broadcast;
mod capacity;
mod converged;
mod edf;
pub mod engine;
pub mod plan;
mod unicast;

pub use broadcast::plan_broadcast_all;
pub use capacity::{search_capacity, trial_report, users_per_cell, CapacityEstimate, CapacityProbe};
pub use converged::{plan_converged, pushing_list, PushList};
pub use engine::{evaluate, Channels, Environment, Evaluation};
pub use plan::{
    BroadcastAction, CacheDirective, CacheTarget, Channel, DeliveryPlan, ItemRef, PetGroup,
    PetSegmentRef, UnicastAction,
};
pub use unicast::plan_unicast;

use crate::catalog::{CacheSpec, Catalog, CatalogError, ServiceRequest};
use crate::pet::PetError;
use crate::workload::WorkloadError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error(transparent)]
    Scenario(#[from] CatalogError),
    #[error("{channel:?} channel carries {load_hz} Hz at t={at_s}s, limit is {limit_hz} Hz")]
    PlanExceedsBandwidth { channel: Channel, at_s: f64, load_hz: f64, limit_hz: f64 },
    #[error("plan references unknown object {0}")]
    UnknownObject(u32),
    #[error("plan references unknown user {0}")]
    UnknownUser(u32),
    #[error("plan references unknown PET group {0}")]
    UnknownGroup(u32),
    #[error("packet {index} is outside PET group {group}")]
    PacketOutOfRange { group: u32, index: usize },
    #[error("transmission [{start_s}, {end_s}] leaves the horizon [0, {horizon_s}]")]
    OutsideHorizon { start_s: f64, end_s: f64, horizon_s: f64 },
    #[error("transmission of {bits} bits only has room for {capacity_bits}")]
    ActionTooShort { bits: u64, capacity_bits: f64 },
    #[error("invalid timing: {0}")]
    BadTiming(&'static str),
    #[error("invalid PET group: {0}")]
    BadGroup(&'static str),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchedError {
    #[error("invalid configuration: {0}")]
    Config(&'static str),
    #[error("popularity has {got} entries for {expected} objects")]
    PopularityLength { expected: usize, got: usize },
    #[error(transparent)]
    Scenario(#[from] CatalogError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Pet(#[from] PetError),
    #[error(transparent)]
    Workload(#[from] WorkloadError),
}

/// What a user keeps from a PET-encoded push.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PetCacheMode {
    /// Store as many encoded packets as fit; objects whose threshold is met
    /// decode from them.
    #[default]
    Packets,
    /// Store decoded objects, most popular first, while they fit.
    Segments,
}

/// Split of resources in a broadcast + cellular converged cell.
///
/// Deserializing fills missing fields from [`Default`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ConvergedConfig {
    pub broadcast_bw_hz: f64,
    pub cellular_bw_hz: f64,
    pub cache: CacheSpec,
    pub pet_enabled: bool,
    pub rho_floor: f64,
    pub push_period_s: f64,
    /// Packets per PET codeword when `pet_enabled`.
    pub pet_packets: usize,
    pub pet_cache: PetCacheMode,
    pub link_rate_bps_per_hz: f64,
}

impl Default for ConvergedConfig {
    fn default() -> Self {
        Self {
            broadcast_bw_hz: 0.0,
            cellular_bw_hz: 1.0,
            cache: CacheSpec::Infinite,
            pet_enabled: false,
            rho_floor: 0.25,
            push_period_s: 1.0,
            pet_packets: 16,
            pet_cache: PetCacheMode::Packets,
            link_rate_bps_per_hz: 1.0,
        }
    }
}

impl ConvergedConfig {
    pub fn validate(&self, horizon_s: f64) -> Result<(), SchedError> {
        let non_negative = |x: f64| x.is_finite() && x >= 0.0;
        if !non_negative(self.broadcast_bw_hz) || !non_negative(self.cellular_bw_hz) {
            return Err(SchedError::Config("bandwidths must be finite and non-negative"));
        }
        if !(self.push_period_s > 0.0 && self.push_period_s <= horizon_s) {
            return Err(SchedError::Config("push period must lie in (0, T]"));
        }
        if !(self.rho_floor > 0.0 && self.rho_floor <= 1.0) {
            return Err(SchedError::Config("rho floor must lie in (0, 1]"));
        }
        if self.pet_enabled && !(1..=crate::pet::MAX_PACKETS).contains(&self.pet_packets) {
            return Err(SchedError::Config("PET packet count must lie in 1..=255"));
        }
        if !(self.link_rate_bps_per_hz.is_finite() && self.link_rate_bps_per_hz > 0.0) {
            return Err(SchedError::Config("link rate must be positive"));
        }
        Ok(())
    }

    pub fn channels(&self) -> Channels {
        Channels::Split { broadcast_hz: self.broadcast_bw_hz, cellular_hz: self.cellular_bw_hz }
    }
}

/// Aggregate outcome of a simulated plan.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimReport {
    /// Delivered package bits per `(B_b + B_c) × T`.
    pub content_rate: f64,
    pub delivered_bits: u64,
    pub satisfied: usize,
    pub n_users: usize,
    pub cache_hit_bits: u64,
    pub unicast_delivered_bits: u64,
    pub broadcast_bits: u64,
    pub unicast_bits: u64,
    pub peak_broadcast_load_hz: f64,
    pub peak_cellular_load_hz: f64,
    pub peak_cache_bits: u64,
}

impl SimReport {
    pub fn from_evaluation(e: &Evaluation, resource: f64) -> Self {
        Self {
            content_rate: if resource > 0.0 { e.delivered_bits as f64 / resource } else { 0.0 },
            delivered_bits: e.delivered_bits,
            satisfied: e.satisfied_count(),
            n_users: e.n_users,
            cache_hit_bits: e.cache_hit_bits,
            unicast_delivered_bits: e.unicast_delivered_bits,
            broadcast_bits: e.broadcast_bits,
            unicast_bits: e.unicast_bits,
            peak_broadcast_load_hz: e.peak_broadcast_load_hz,
            peak_cellular_load_hz: e.peak_cellular_load_hz,
            peak_cache_bits: e.peak_cache_bits,
        }
    }

    pub fn all_satisfied(&self) -> bool {
        self.satisfied == self.n_users
    }
}

/// Per-channel bandwidths for [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelBudgets {
    pub broadcast_hz: f64,
    pub cellular_hz: f64,
    pub link_rate_bps_per_hz: f64,
}

/// Replays `plan` on independent broadcast and cellular channels.
pub fn simulate(
    plan: &DeliveryPlan,
    requests: &[ServiceRequest],
    catalog: &Catalog,
    cache: CacheSpec,
    budgets: ChannelBudgets,
    horizon_s: f64,
) -> Result<SimReport, PlanError> {
    let channels = Channels::Split {
        broadcast_hz: budgets.broadcast_hz,
        cellular_hz: budgets.cellular_hz,
    };
    let env = Environment {
        catalog,
        requests,
        cache,
        channels,
        horizon_s,
        link_rate_bps_per_hz: budgets.link_rate_bps_per_hz,
    };
    let eval = evaluate(plan, &env)?;
    Ok(SimReport::from_evaluation(&eval, channels.total_hz() * horizon_s))
}
