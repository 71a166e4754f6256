use alloc::vec::Vec;

use super::edf::{self, Job};
use super::plan::DeliveryPlan;
use super::SchedError;
use crate::catalog::{validate_requests, Catalog, ServiceRequest};

pub(crate) fn full_jobs(requests: &[ServiceRequest], catalog: &Catalog) -> Vec<Job> {
    requests
        .iter()
        .map(|r| Job {
            user: r.user_id,
            deadline: r.request_time_s,
            objects: r
                .object_ids()
                .iter()
                .map(|&o| (o, catalog.size_of(o).unwrap_or(0)))
                .collect(),
        })
        .collect()
}

/// Unicasts every package over the cellular channel with no caching.
///
/// Packages that cannot all finish by their request times are dropped
/// (the fewest possible), and the rest are sent earliest-deadline-first.
/// Shared objects are sent once per requesting user.
pub fn plan_unicast(
    requests: &[ServiceRequest],
    catalog: &Catalog,
    cellular_bw_hz: f64,
    link_rate_bps_per_hz: f64,
) -> Result<DeliveryPlan, SchedError> {
    validate_requests(requests, catalog, None)?;
    Ok(DeliveryPlan {
        unicast_actions: edf::schedule(full_jobs(requests, catalog), cellular_bw_hz, link_rate_bps_per_hz),
        ..DeliveryPlan::default()
    })
}
