use super::{CacheSpec, Catalog, ContentRateReport, ServiceRequest, WirelessBudget};
use crate::sched::engine::{evaluate, Channels, Environment};
use crate::sched::{DeliveryPlan, PlanError};

/// Judges `plan` against one channel of `budget.bandwidth_hz` shared by all
/// broadcast and unicast actions.
///
/// A user is satisfied when each of its requests has every object either
/// in its cache or unicast to it by the request time, and its cache never
/// holds more than `cache` bits. Overflowing caches mark the user
/// unsatisfied; overloading the channel is an error.
pub fn check_achievable(
    plan: &DeliveryPlan,
    requests: &[ServiceRequest],
    catalog: &Catalog,
    cache: CacheSpec,
    budget: &WirelessBudget,
) -> Result<ContentRateReport, PlanError> {
    let env = Environment {
        catalog,
        requests,
        cache,
        channels: Channels::Shared { bandwidth_hz: budget.bandwidth_hz },
        horizon_s: budget.horizon_s,
        link_rate_bps_per_hz: budget.link_rate_bps_per_hz,
    };
    Ok(evaluate(plan, &env)?.rate_report(budget.resource()))
}
