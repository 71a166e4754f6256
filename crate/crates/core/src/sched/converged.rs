use alloc::vec::Vec;

use super::edf::{self, Job};
use super::engine::CacheModel;
use super::plan::{
    BroadcastAction, CacheDirective, CacheTarget, DeliveryPlan, ItemRef, PetGroup, PetSegmentRef,
};
use super::{ConvergedConfig, PetCacheMode, SchedError};
use crate::catalog::{validate_requests, CacheSpec, Catalog, ServiceRequest};
use crate::num::approx_le;
use crate::pet::{assign_priorities, plan_layout, PriorityProfile};

/// Objects chosen for periodic broadcast.
#[derive(Debug, Clone, PartialEq)]
pub struct PushList {
    /// Pushed objects, most popular first.
    pub objects: Vec<u32>,
    /// Joint encoding of `objects` when PET is enabled.
    pub pet_group: Option<PetGroup>,
    /// Bits broadcast per push period.
    pub period_bits: u64,
}

fn popularity_order(popularity: &[f64]) -> Vec<u32> {
    let mut order: Vec<u32> = (0..popularity.len() as u32).collect();
    order.sort_by(|&a, &b| {
        popularity[b as usize].total_cmp(&popularity[a as usize]).then(a.cmp(&b))
    });
    order
}

fn pet_group_for(
    objects: &[u32],
    catalog: &Catalog,
    popularity: &[f64],
    cfg: &ConvergedConfig,
) -> Result<PetGroup, SchedError> {
    let pops: Vec<f64> = objects.iter().map(|&o| popularity[o as usize]).collect();
    let total: f64 = pops.iter().sum();
    let profile = if total > 0.0 {
        let norm: Vec<f64> = pops.iter().map(|p| p / total).collect();
        assign_priorities(&norm, cfg.rho_floor)?
    } else {
        PriorityProfile::uniform(objects.len())
    };
    let sizes: Vec<u64> = objects.iter().map(|&o| catalog.size_of(o).unwrap_or(0)).collect();
    let layout = plan_layout(&sizes, &profile, cfg.pet_packets)?;
    Ok(PetGroup {
        id: 0,
        n_packets: layout.n_packets,
        packet_bits: layout.packet_symbols as u64 * 8,
        segments: objects
            .iter()
            .zip(&layout.segments)
            .map(|(&object_id, s)| PetSegmentRef { object_id, k: s.k })
            .collect(),
    })
}

/// Greedy pushing list: the longest prefix of the popularity order whose
/// per-period broadcast fits `B_b × push_period` and, without PET, whose
/// total size fits the user cache.
pub fn pushing_list(
    catalog: &Catalog,
    popularity: &[f64],
    cfg: &ConvergedConfig,
) -> Result<PushList, SchedError> {
    if popularity.len() != catalog.len() {
        return Err(SchedError::PopularityLength { expected: catalog.len(), got: popularity.len() });
    }
    if popularity.iter().any(|p| !p.is_finite() || *p < 0.0) {
        return Err(SchedError::Config("popularities must be finite and non-negative"));
    }
    let budget_bits = cfg.broadcast_bw_hz * cfg.link_rate_bps_per_hz * cfg.push_period_s;
    let order = popularity_order(popularity);
    let mut list = PushList { objects: Vec::new(), pet_group: None, period_bits: 0 };
    if !(budget_bits > 0.0) {
        return Ok(list);
    }

    if !cfg.pet_enabled {
        let mut cum = 0u64;
        for &o in &order {
            let next = cum + catalog.size_of(o).unwrap_or(0);
            if !approx_le(next as f64, budget_bits) || !cfg.cache.holds(next) {
                break;
            }
            cum = next;
            list.objects.push(o);
        }
        list.period_bits = cum;
        return Ok(list);
    }

    for m in 1..=order.len() {
        let group = pet_group_for(&order[..m], catalog, popularity, cfg)?;
        let bits = group.packet_bits * group.n_packets as u64;
        if !approx_le(bits as f64, budget_bits) {
            break;
        }
        list.objects = order[..m].to_vec();
        list.period_bits = bits;
        list.pet_group = Some(group);
    }
    Ok(list)
}

fn push_plan(list: &PushList, catalog: &Catalog, cfg: &ConvergedConfig, horizon_s: f64) -> DeliveryPlan {
    let mut plan = DeliveryPlan::default();
    if list.objects.is_empty() {
        return plan;
    }
    let rate = cfg.broadcast_bw_hz * cfg.link_rate_bps_per_hz;
    let items: Vec<(ItemRef, u64)> = match &list.pet_group {
        None => list
            .objects
            .iter()
            .map(|&o| (ItemRef::object(o), catalog.size_of(o).unwrap_or(0)))
            .collect(),
        Some(g) => (0..g.n_packets)
            .map(|index| (ItemRef::PetPacket { group: g.id, index }, g.packet_bits))
            .collect(),
    };

    let mut period = 0u32;
    loop {
        let base = f64::from(period) * cfg.push_period_s;
        if !approx_le(base + list.period_bits as f64 / rate, horizon_s) {
            break;
        }
        let mut cum = 0u64;
        for &(item, bits) in &items {
            let start_s = base + cum as f64 / rate;
            cum += bits;
            let end_s = base + cum as f64 / rate;
            plan.broadcast_actions.push(BroadcastAction {
                item,
                start_s,
                duration_s: end_s - start_s,
                bandwidth_hz: cfg.broadcast_bw_hz,
            });
        }
        period += 1;
    }

    let keep = |item| CacheDirective {
        target: CacheTarget::AllUsers,
        item,
        admit_at_s: 0.0,
        evict_at_s: None,
    };
    match &list.pet_group {
        None => plan
            .cache_directives
            .extend(list.objects.iter().map(|&o| keep(ItemRef::object(o)))),
        Some(g) => {
            match cfg.pet_cache {
                PetCacheMode::Packets => {
                    let fit = match cfg.cache {
                        CacheSpec::Infinite => g.n_packets,
                        CacheSpec::Finite(m) => ((m / g.packet_bits) as usize).min(g.n_packets),
                    };
                    plan.cache_directives.extend(
                        (0..fit).map(|index| keep(ItemRef::PetPacket { group: g.id, index })),
                    );
                }
                PetCacheMode::Segments => {
                    let mut cum = 0u64;
                    for &o in &list.objects {
                        cum += catalog.size_of(o).unwrap_or(0);
                        if !cfg.cache.holds(cum) {
                            break;
                        }
                        plan.cache_directives.push(keep(ItemRef::object(o)));
                    }
                }
            }
            plan.pet_groups.push(g.clone());
        }
    }
    plan
}

/// Converged push + unicast plan.
///
/// The pushing list (see [`pushing_list`]) is rebroadcast back to back at
/// the start of every push period that fits in the horizon and every user
/// caches it. Each request then gets cellular unicasts for the objects its
/// cache does not hold by the request time, scheduled as in
/// [`plan_unicast`](super::plan_unicast). With `B_b = 0` the result equals
/// the unicast plan.
pub fn plan_converged(
    requests: &[ServiceRequest],
    catalog: &Catalog,
    popularity: &[f64],
    cfg: &ConvergedConfig,
    horizon_s: f64,
) -> Result<DeliveryPlan, SchedError> {
    cfg.validate(horizon_s)?;
    validate_requests(requests, catalog, Some(horizon_s))?;
    let list = pushing_list(catalog, popularity, cfg)?;
    let mut plan = push_plan(&list, catalog, cfg, horizon_s);

    let model = CacheModel::new(&plan);
    let jobs = requests
        .iter()
        .map(|r| Job {
            user: r.user_id,
            deadline: r.request_time_s,
            objects: r
                .object_ids()
                .iter()
                .filter(|&&o| !model.cached_at(r.user_id, o, r.request_time_s))
                .map(|&o| (o, catalog.size_of(o).unwrap_or(0)))
                .collect(),
        })
        .collect();
    plan.unicast_actions = edf::schedule(jobs, cfg.cellular_bw_hz, cfg.link_rate_bps_per_hz);
    Ok(plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sched::{plan_unicast, simulate, ChannelBudgets};
    use std::vec;

    fn budgets(cfg: &ConvergedConfig) -> ChannelBudgets {
        ChannelBudgets {
            broadcast_hz: cfg.broadcast_bw_hz,
            cellular_hz: cfg.cellular_bw_hz,
            link_rate_bps_per_hz: cfg.link_rate_bps_per_hz,
        }
    }

    fn scenario() -> (Catalog, std::vec::Vec<ServiceRequest>, std::vec::Vec<f64>) {
        let cat = Catalog::from_sizes(&[100, 100, 100, 100]).unwrap();
        let reqs = vec![
            ServiceRequest::new(0, 8.0, vec![0]).unwrap(),
            ServiceRequest::new(1, 9.0, vec![0, 1]).unwrap(),
            ServiceRequest::new(2, 10.0, vec![3]).unwrap(),
            ServiceRequest::new(3, 10.0, vec![0, 2]).unwrap(),
        ];
        (cat, reqs, vec![0.4, 0.3, 0.2, 0.1])
    }

    #[test]
    fn zero_broadcast_is_unicast() {
        let (cat, reqs, pop) = scenario();
        let cfg = ConvergedConfig { cellular_bw_hz: 40.0, push_period_s: 5.0, ..Default::default() };
        let conv = plan_converged(&reqs, &cat, &pop, &cfg, 10.0).unwrap();
        assert_eq!(conv, plan_unicast(&reqs, &cat, 40.0, 1.0).unwrap());
    }

    #[test]
    fn ample_broadcast_needs_no_unicast() {
        let (cat, reqs, pop) = scenario();
        let cfg = ConvergedConfig {
            broadcast_bw_hz: 50.0,
            cellular_bw_hz: 1.0,
            push_period_s: 8.0,
            ..Default::default()
        };
        let plan = plan_converged(&reqs, &cat, &pop, &cfg, 10.0).unwrap();
        assert!(plan.unicast_actions.is_empty());
        let rep = simulate(&plan, &reqs, &cat, cfg.cache, budgets(&cfg), 10.0).unwrap();
        assert!(rep.all_satisfied());
        assert_eq!(rep.unicast_bits, 0);
        assert_eq!(rep.cache_hit_bits, rep.delivered_bits);
    }

    #[test]
    fn pushing_list_is_a_popularity_prefix() {
        let (cat, _, pop) = scenario();
        let cfg = ConvergedConfig { broadcast_bw_hz: 25.0, push_period_s: 10.0, ..Default::default() };
        let list = pushing_list(&cat, &pop, &cfg).unwrap();
        assert_eq!(list.objects, vec![0, 1]);
        let small_cache = ConvergedConfig { cache: CacheSpec::Finite(150), ..cfg };
        assert_eq!(pushing_list(&cat, &pop, &small_cache).unwrap().objects, vec![0]);
    }

    #[test]
    fn partial_push_plus_residual_unicast() {
        let (cat, reqs, pop) = scenario();
        let cfg = ConvergedConfig {
            broadcast_bw_hz: 25.0,
            cellular_bw_hz: 30.0,
            push_period_s: 4.0,
            ..Default::default()
        };
        let plan = plan_converged(&reqs, &cat, &pop, &cfg, 10.0).unwrap();
        // Object 0 is pushed (done at t = 4) and object 1 is not.
        assert!(plan.unicast_actions.iter().all(|a| a.object_id != 0));
        let rep = simulate(&plan, &reqs, &cat, cfg.cache, budgets(&cfg), 10.0).unwrap();
        assert!(rep.all_satisfied());
        assert_eq!(rep.cache_hit_bits + rep.unicast_delivered_bits, rep.delivered_bits);
        assert_eq!(rep.cache_hit_bits, 300);
    }

    #[test]
    fn pet_push_decodes_from_packets() {
        let (cat, reqs, pop) = scenario();
        for mode in [PetCacheMode::Packets, PetCacheMode::Segments] {
            let cfg = ConvergedConfig {
                broadcast_bw_hz: 200.0,
                cellular_bw_hz: 1.0,
                push_period_s: 8.0,
                pet_enabled: true,
                pet_packets: 8,
                pet_cache: mode,
                ..Default::default()
            };
            let plan = plan_converged(&reqs, &cat, &pop, &cfg, 10.0).unwrap();
            assert_eq!(plan.pet_groups.len(), 1);
            assert!(plan.unicast_actions.is_empty(), "{mode:?}");
            let rep = simulate(&plan, &reqs, &cat, cfg.cache, budgets(&cfg), 10.0).unwrap();
            assert!(rep.all_satisfied(), "{mode:?}");
        }
    }

    #[test]
    fn pet_cache_limit_keeps_only_popular_objects() {
        let (cat, reqs, pop) = scenario();
        let cfg = ConvergedConfig {
            broadcast_bw_hz: 200.0,
            cellular_bw_hz: 0.0,
            push_period_s: 8.0,
            pet_enabled: true,
            pet_packets: 8,
            rho_floor: 0.25,
            ..Default::default()
        };
        let group = pushing_list(&cat, &pop, &cfg).unwrap().pet_group.unwrap();
        let ks: std::vec::Vec<usize> = group.segments.iter().map(|s| s.k).collect();
        assert_eq!(ks, vec![2, 4, 6, 8]);
        // Room for two packets: only the most popular object decodes.
        let cfg = ConvergedConfig { cache: CacheSpec::Finite(2 * group.packet_bits), ..cfg };
        let plan = plan_converged(&reqs, &cat, &pop, &cfg, 10.0).unwrap();
        let rep = simulate(&plan, &reqs, &cat, cfg.cache, budgets(&cfg), 10.0).unwrap();
        assert_eq!(rep.satisfied, 1);
    }
}
