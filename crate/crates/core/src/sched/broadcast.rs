use alloc::vec::Vec;

use super::plan::{BroadcastAction, CacheDirective, CacheTarget, DeliveryPlan, ItemRef};
use crate::catalog::Catalog;
use crate::num::approx_le;

/// Broadcasts every object once, back to back from `t = 0` in id order, and
/// has every user cache each of them from the start.
///
/// Objects that would finish after `horizon_s` are left out.
pub fn plan_broadcast_all(
    catalog: &Catalog,
    broadcast_bw_hz: f64,
    horizon_s: f64,
    link_rate_bps_per_hz: f64,
) -> DeliveryPlan {
    let rate = broadcast_bw_hz * link_rate_bps_per_hz;
    let mut plan = DeliveryPlan::default();
    if !(rate > 0.0) {
        return plan;
    }
    let mut cum = 0u64;
    let mut actions = Vec::new();
    for o in catalog.objects() {
        let start_s = cum as f64 / rate;
        let end_s = (cum + o.size_bits) as f64 / rate;
        if !approx_le(end_s, horizon_s) {
            break;
        }
        cum += o.size_bits;
        actions.push(BroadcastAction {
            item: ItemRef::object(o.id),
            start_s,
            duration_s: end_s - start_s,
            bandwidth_hz: broadcast_bw_hz,
        });
        plan.cache_directives.push(CacheDirective {
            target: CacheTarget::AllUsers,
            item: ItemRef::object(o.id),
            admit_at_s: 0.0,
            evict_at_s: None,
        });
    }
    plan.broadcast_actions = actions;
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{bandwidth_lower_bound, CacheSpec, ServiceRequest};
    use crate::sched::{simulate, ChannelBudgets};
    use std::vec;

    fn scenario() -> (Catalog, std::vec::Vec<ServiceRequest>) {
        let cat = Catalog::from_sizes(&[100, 200, 300]).unwrap();
        let reqs = vec![
            ServiceRequest::new(0, 10.0, vec![0, 2]).unwrap(),
            ServiceRequest::new(1, 10.0, vec![1, 2]).unwrap(),
        ];
        (cat, reqs)
    }

    #[test]
    fn finishes_exactly_at_horizon() {
        let (cat, reqs) = scenario();
        let plan = plan_broadcast_all(&cat, 60.0, 10.0, 1.0);
        let last = plan.broadcast_actions.last().unwrap();
        assert_eq!(last.start_s + last.duration_s, 10.0);
        let b = ChannelBudgets { broadcast_hz: 60.0, cellular_hz: 0.0, link_rate_bps_per_hz: 1.0 };
        let rep = simulate(&plan, &reqs, &cat, CacheSpec::Infinite, b, 10.0).unwrap();
        assert_eq!(rep.satisfied, 2);
        assert_eq!(rep.broadcast_bits, 600);
        let b_min = bandwidth_lower_bound(&cat, 10.0).unwrap();
        assert_eq!(rep.content_rate, 900.0 / (b_min * 10.0));
    }

    #[test]
    fn below_lower_bound_misses() {
        let (cat, reqs) = scenario();
        let plan = plan_broadcast_all(&cat, 50.0, 10.0, 1.0);
        assert_eq!(plan.broadcast_actions.len(), 2);
        let b = ChannelBudgets { broadcast_hz: 50.0, cellular_hz: 0.0, link_rate_bps_per_hz: 1.0 };
        let rep = simulate(&plan, &reqs, &cat, CacheSpec::Infinite, b, 10.0).unwrap();
        assert_eq!(rep.satisfied, 0);
    }

    #[test]
    fn small_cache_overflows() {
        // Every user caches all 600 bits; a 599-bit cache overflows at the
        // third admission, a 600-bit one does not.
        let (cat, reqs) = scenario();
        let plan = plan_broadcast_all(&cat, 60.0, 10.0, 1.0);
        let b = ChannelBudgets { broadcast_hz: 60.0, cellular_hz: 0.0, link_rate_bps_per_hz: 1.0 };
        let tight = simulate(&plan, &reqs, &cat, CacheSpec::Finite(599), b, 10.0).unwrap();
        assert_eq!(tight.satisfied, 0);
        let fits = simulate(&plan, &reqs, &cat, CacheSpec::Finite(600), b, 10.0).unwrap();
        assert_eq!(fits.satisfied, 2);
        assert_eq!(fits.peak_cache_bits, 600);
    }
}
