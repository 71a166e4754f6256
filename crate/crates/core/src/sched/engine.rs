//! Event-driven replay of a delivery plan.
//!
//! The engine never steps time. It sorts the start/end events of every
//! transmission to check channel capacity, sorts admit/evict events of every
//! cache directive to check per-user occupancy, and answers availability
//! queries against the sorted completion times of each broadcast item.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::plan::{CacheDirective, CacheTarget, Channel, DeliveryPlan, ItemRef, PetGroup};
use super::PlanError;
use crate::catalog::{
    user_count, validate_requests, CacheSpec, Catalog, ContentRateReport, ServiceRequest,
};
use crate::num::{approx_le, REL_EPS};

/// Bandwidth available to a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Channels {
    /// One shared channel carries broadcast and unicast alike.
    Shared { bandwidth_hz: f64 },
    /// Independent broadcast and cellular pools.
    Split { broadcast_hz: f64, cellular_hz: f64 },
}

impl Channels {
    /// Total bandwidth, the `B` of the content rate.
    pub fn total_hz(&self) -> f64 {
        match *self {
            Channels::Shared { bandwidth_hz } => bandwidth_hz,
            Channels::Split { broadcast_hz, cellular_hz } => broadcast_hz + cellular_hz,
        }
    }
}

/// Everything a plan is judged against.
#[derive(Debug, Clone, Copy)]
pub struct Environment<'a> {
    pub catalog: &'a Catalog,
    pub requests: &'a [ServiceRequest],
    pub cache: CacheSpec,
    pub channels: Channels,
    pub horizon_s: f64,
    pub link_rate_bps_per_hz: f64,
}

/// Per-request and aggregate outcome of a replay.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub n_users: usize,
    pub request_satisfied: Vec<bool>,
    pub user_satisfied: Vec<bool>,
    pub cache_overflow: Vec<bool>,
    /// `Σ |y_k|` over requests of satisfied users.
    pub delivered_bits: u64,
    /// Part of `delivered_bits` served from user caches.
    pub cache_hit_bits: u64,
    /// Part of `delivered_bits` served by unicast.
    pub unicast_delivered_bits: u64,
    /// Bits put on the broadcast channel.
    pub broadcast_bits: u64,
    /// Bits put on the cellular channel.
    pub unicast_bits: u64,
    pub peak_broadcast_load_hz: f64,
    pub peak_cellular_load_hz: f64,
    pub peak_cache_bits: u64,
}

impl Evaluation {
    pub fn satisfied_count(&self) -> usize {
        self.user_satisfied.iter().filter(|s| **s).count()
    }

    pub fn all_satisfied(&self) -> bool {
        self.user_satisfied.iter().all(|s| *s)
    }

    /// Content-rate report against a resource of `resource = B × T`.
    pub fn rate_report(&self, resource: f64) -> ContentRateReport {
        let (mut satisfied_users, mut unsatisfied_users) = (BTreeSet::new(), BTreeSet::new());
        for (u, &ok) in self.user_satisfied.iter().enumerate() {
            if ok {
                satisfied_users.insert(u as u32);
            } else {
                unsatisfied_users.insert(u as u32);
            }
        }
        ContentRateReport {
            delivered_bits: self.delivered_bits,
            content_rate: if resource > 0.0 { self.delivered_bits as f64 / resource } else { 0.0 },
            satisfied_users,
            unsatisfied_users,
        }
    }
}

fn item_bits(
    item: &ItemRef,
    catalog: &Catalog,
    groups: &BTreeMap<u32, &PetGroup>,
) -> Result<u64, PlanError> {
    match *item {
        ItemRef::Object { object_id } => {
            catalog.size_of(object_id).ok_or(PlanError::UnknownObject(object_id))
        }
        ItemRef::PetPacket { group, index } => {
            let g = groups.get(&group).ok_or(PlanError::UnknownGroup(group))?;
            if index >= g.n_packets {
                return Err(PlanError::PacketOutOfRange { group, index });
            }
            Ok(g.packet_bits)
        }
    }
}

fn sorted_first_at_or_after(times: &[f64], admit: f64) -> Option<f64> {
    let i = times.partition_point(|&c| !approx_le(admit, c));
    times.get(i).copied()
}

/// Completion times of every broadcast item.
#[derive(Debug, Default)]
struct Deliveries {
    objects: BTreeMap<u32, Vec<f64>>,
    packets: BTreeMap<(u32, usize), Vec<f64>>,
    group_sizes: BTreeMap<u32, usize>,
    object_groups: BTreeMap<u32, Vec<(u32, usize)>>,
}

impl Deliveries {
    fn new(plan: &DeliveryPlan) -> Self {
        let mut d = Deliveries::default();
        for a in &plan.broadcast_actions {
            let end = a.start_s + a.duration_s;
            match a.item {
                ItemRef::Object { object_id } => d.objects.entry(object_id).or_default().push(end),
                ItemRef::PetPacket { group, index } => {
                    d.packets.entry((group, index)).or_default().push(end)
                }
            }
        }
        for list in d.objects.values_mut().chain(d.packets.values_mut()) {
            list.sort_unstable_by(f64::total_cmp);
        }
        for g in &plan.pet_groups {
            d.group_sizes.insert(g.id, g.n_packets);
            for s in &g.segments {
                d.object_groups.entry(s.object_id).or_default().push((g.id, s.k));
            }
        }
        d
    }

    fn packet_after(&self, group: u32, index: usize, admit: f64) -> Option<f64> {
        self.packets.get(&(group, index)).and_then(|t| sorted_first_at_or_after(t, admit))
    }

    /// Earliest instant at or after `admit` at which `object` can be
    /// rebuilt from broadcasts alone.
    fn object_after(&self, object: u32, admit: f64) -> Option<f64> {
        let plain = self.objects.get(&object).and_then(|t| sorted_first_at_or_after(t, admit));
        let coded = self.object_groups.get(&object).into_iter().flatten().filter_map(|&(g, k)| {
            let n = self.group_sizes.get(&g).copied().unwrap_or(0);
            let mut arrivals: Vec<f64> = (0..n).filter_map(|i| self.packet_after(g, i, admit)).collect();
            if arrivals.len() < k {
                return None;
            }
            arrivals.sort_unstable_by(f64::total_cmp);
            Some(arrivals[k - 1])
        });
        plain.into_iter().chain(coded).min_by(f64::total_cmp)
    }
}

#[derive(Debug, Default)]
struct DirectiveIndex {
    objects: BTreeMap<u32, Vec<(f64, Option<f64>)>>,
    packets: BTreeMap<u32, Vec<(usize, f64, Option<f64>)>>,
}

impl DirectiveIndex {
    fn push(&mut self, d: &CacheDirective) {
        match d.item {
            ItemRef::Object { object_id } => {
                self.objects.entry(object_id).or_default().push((d.admit_at_s, d.evict_at_s))
            }
            ItemRef::PetPacket { group, index } => {
                self.packets.entry(group).or_default().push((index, d.admit_at_s, d.evict_at_s))
            }
        }
    }
}

fn held_at(admit: f64, evict: Option<f64>, t: f64) -> bool {
    approx_le(admit, t) && evict.is_none_or(|e| approx_le(t, e))
}

/// Which objects sit in which user's cache, and when.
#[derive(Debug)]
pub(crate) struct CacheModel {
    deliveries: Deliveries,
    shared: DirectiveIndex,
    per_user: BTreeMap<u32, DirectiveIndex>,
}

impl CacheModel {
    pub(crate) fn new(plan: &DeliveryPlan) -> Self {
        let mut shared = DirectiveIndex::default();
        let mut per_user: BTreeMap<u32, DirectiveIndex> = BTreeMap::new();
        for d in &plan.cache_directives {
            match d.target {
                CacheTarget::AllUsers => shared.push(d),
                CacheTarget::User(u) => per_user.entry(u).or_default().push(d),
            }
        }
        Self { deliveries: Deliveries::new(plan), shared, per_user }
    }

    /// Whether `user` holds a decodable copy of `object` at time `t`.
    pub(crate) fn cached_at(&self, user: u32, object: u32, t: f64) -> bool {
        let indexes = [Some(&self.shared), self.per_user.get(&user)];
        let indexes = indexes.iter().flatten();

        for idx in indexes.clone() {
            for &(admit, evict) in idx.objects.get(&object).into_iter().flatten() {
                if held_at(admit, evict, t)
                    && self.deliveries.object_after(object, admit).is_some_and(|c| approx_le(c, t))
                {
                    return true;
                }
            }
        }

        for &(group, k) in self.deliveries.object_groups.get(&object).into_iter().flatten() {
            let mut have = BTreeSet::new();
            for idx in indexes.clone() {
                for &(index, admit, evict) in idx.packets.get(&group).into_iter().flatten() {
                    if held_at(admit, evict, t)
                        && self
                            .deliveries
                            .packet_after(group, index, admit)
                            .is_some_and(|c| approx_le(c, t))
                    {
                        have.insert(index);
                    }
                }
            }
            if have.len() >= k {
                return true;
            }
        }
        false
    }
}

/// Peak of a sum of weighted intervals. An interval ending where another
/// starts does not overlap it.
fn peak_load(intervals: impl Iterator<Item = (f64, f64, f64)>) -> (f64, f64) {
    // (time, is_start, weight)
    let mut events: Vec<(f64, bool, f64)> = Vec::new();
    for (start, end, w) in intervals {
        events.push((start, true, w));
        if end.is_finite() {
            events.push((end - REL_EPS * libm::fabs(end).max(1.0), false, w));
        }
    }
    events.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let (mut load, mut peak, mut at) = (0.0f64, 0.0f64, 0.0f64);
    for (t, is_start, w) in events {
        if is_start {
            load += w;
            if load > peak {
                peak = load;
                at = t;
            }
        } else {
            load -= w;
        }
    }
    (peak, at)
}

fn check_channel(
    channel: Channel,
    intervals: impl Iterator<Item = (f64, f64, f64)>,
    limit_hz: f64,
) -> Result<f64, PlanError> {
    let (peak, at_s) = peak_load(intervals);
    if peak > limit_hz * (1.0 + REL_EPS) + 1e-12 {
        return Err(PlanError::PlanExceedsBandwidth { channel, at_s, load_hz: peak, limit_hz });
    }
    Ok(peak)
}

fn check_timing(
    start_s: f64,
    duration_s: f64,
    bandwidth_hz: f64,
    bits: u64,
    env: &Environment<'_>,
) -> Result<(), PlanError> {
    if !(start_s.is_finite() && duration_s.is_finite() && bandwidth_hz.is_finite()) {
        return Err(PlanError::BadTiming("non-finite start, duration or bandwidth"));
    }
    if duration_s < 0.0 || bandwidth_hz <= 0.0 {
        return Err(PlanError::BadTiming("negative duration or non-positive bandwidth share"));
    }
    let end_s = start_s + duration_s;
    if !approx_le(0.0, start_s) || !approx_le(end_s, env.horizon_s) {
        return Err(PlanError::OutsideHorizon { start_s, end_s, horizon_s: env.horizon_s });
    }
    let capacity_bits = duration_s * bandwidth_hz * env.link_rate_bps_per_hz;
    if !approx_le(bits as f64, capacity_bits) {
        return Err(PlanError::ActionTooShort { bits, capacity_bits });
    }
    Ok(())
}

/// Replays `plan` against `env`.
///
/// Malformed plans (unknown references, transmissions outside the horizon,
/// over-subscribed channels) are errors. Cache overflow is not: it marks
/// the affected user unsatisfied.
pub fn evaluate(plan: &DeliveryPlan, env: &Environment<'_>) -> Result<Evaluation, PlanError> {
    let catalog = env.catalog;
    validate_requests(env.requests, catalog, Some(env.horizon_s))?;
    if !(env.link_rate_bps_per_hz.is_finite() && env.link_rate_bps_per_hz > 0.0) {
        return Err(PlanError::BadTiming("link rate must be positive"));
    }
    let n_users = user_count(env.requests);

    let mut groups: BTreeMap<u32, &PetGroup> = BTreeMap::new();
    for g in &plan.pet_groups {
        if g.n_packets == 0 || g.n_packets > crate::pet::MAX_PACKETS || g.packet_bits == 0 {
            return Err(PlanError::BadGroup("packet count must be in 1..=255 and packets non-empty"));
        }
        for s in &g.segments {
            catalog.get(s.object_id).ok_or(PlanError::UnknownObject(s.object_id))?;
            if s.k == 0 || s.k > g.n_packets {
                return Err(PlanError::BadGroup("segment threshold outside 1..=N"));
            }
        }
        if groups.insert(g.id, g).is_some() {
            return Err(PlanError::BadGroup("duplicate group id"));
        }
    }

    let mut broadcast_bits = 0u64;
    for a in &plan.broadcast_actions {
        let bits = item_bits(&a.item, catalog, &groups)?;
        check_timing(a.start_s, a.duration_s, a.bandwidth_hz, bits, env)?;
        broadcast_bits += bits;
    }
    let mut unicast_bits = 0u64;
    let mut unicast_done: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for a in &plan.unicast_actions {
        if a.user_id as usize >= n_users {
            return Err(PlanError::UnknownUser(a.user_id));
        }
        let bits = catalog.size_of(a.object_id).ok_or(PlanError::UnknownObject(a.object_id))?;
        check_timing(a.start_s, a.duration_s, a.bandwidth_hz, bits, env)?;
        unicast_bits += bits;
        let end = a.start_s + a.duration_s;
        unicast_done
            .entry((a.user_id, a.object_id))
            .and_modify(|t| *t = t.min(end))
            .or_insert(end);
    }

    let bcast = || plan.broadcast_actions.iter().map(|a| (a.start_s, a.start_s + a.duration_s, a.bandwidth_hz));
    let ucast = || plan.unicast_actions.iter().map(|a| (a.start_s, a.start_s + a.duration_s, a.bandwidth_hz));
    let (peak_broadcast_load_hz, peak_cellular_load_hz) = match env.channels {
        Channels::Shared { bandwidth_hz } => {
            check_channel(Channel::Shared, bcast().chain(ucast()), bandwidth_hz)?;
            (peak_load(bcast()).0, peak_load(ucast()).0)
        }
        Channels::Split { broadcast_hz, cellular_hz } => (
            check_channel(Channel::Broadcast, bcast(), broadcast_hz)?,
            check_channel(Channel::Cellular, ucast(), cellular_hz)?,
        ),
    };

    // Cache occupancy, shared directives first.
    let mut shared_iv = Vec::new();
    let mut own_iv: BTreeMap<u32, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for d in &plan.cache_directives {
        let bits = item_bits(&d.item, catalog, &groups)?;
        if !d.admit_at_s.is_finite() || d.evict_at_s.is_some_and(|e| !(e >= d.admit_at_s)) {
            return Err(PlanError::BadTiming("cache directive evicts before it admits"));
        }
        let iv = (d.admit_at_s, d.evict_at_s.unwrap_or(f64::INFINITY), bits as f64);
        match d.target {
            CacheTarget::AllUsers => shared_iv.push(iv),
            CacheTarget::User(u) => {
                if u as usize >= n_users {
                    return Err(PlanError::UnknownUser(u));
                }
                own_iv.entry(u).or_default().push(iv);
            }
        }
    }
    let shared_peak = peak_load(shared_iv.iter().copied()).0;
    let mut cache_overflow = vec![false; n_users];
    let mut peak_cache = if n_users > own_iv.len() { shared_peak } else { 0.0 };
    let limit = env.cache.capacity_bits().map(|c| c as f64);
    for (u, overflow) in cache_overflow.iter_mut().enumerate() {
        let peak = match own_iv.get(&(u as u32)) {
            Some(own) => {
                let p = peak_load(shared_iv.iter().chain(own.iter()).copied()).0;
                peak_cache = peak_cache.max(p);
                p
            }
            None => shared_peak,
        };
        *overflow = limit.is_some_and(|m| peak > m);
    }

    let model = CacheModel::new(plan);
    let mut request_satisfied = Vec::with_capacity(env.requests.len());
    let mut request_cache_bits = Vec::with_capacity(env.requests.len());
    for r in env.requests {
        let t = r.request_time_s;
        let mut ok = !cache_overflow[r.user_id as usize];
        let mut from_cache = 0u64;
        for &o in r.object_ids() {
            if !ok {
                break;
            }
            if model.cached_at(r.user_id, o, t) {
                from_cache += catalog.size_of(o).unwrap_or(0);
            } else if !unicast_done.get(&(r.user_id, o)).is_some_and(|&c| approx_le(c, t)) {
                ok = false;
            }
        }
        request_satisfied.push(ok);
        request_cache_bits.push(from_cache);
    }

    let mut user_satisfied = vec![true; n_users];
    for (r, &ok) in env.requests.iter().zip(&request_satisfied) {
        if !ok {
            user_satisfied[r.user_id as usize] = false;
        }
    }
    let (mut delivered_bits, mut cache_hit_bits) = (0u64, 0u64);
    for ((r, _), &hit) in env.requests.iter().zip(&request_satisfied).zip(&request_cache_bits) {
        if user_satisfied[r.user_id as usize] {
            delivered_bits += catalog.package_bits(r)?;
            cache_hit_bits += hit;
        }
    }

    Ok(Evaluation {
        n_users,
        request_satisfied,
        user_satisfied,
        cache_overflow,
        delivered_bits,
        cache_hit_bits,
        unicast_delivered_bits: delivered_bits - cache_hit_bits,
        broadcast_bits,
        unicast_bits,
        peak_broadcast_load_hz,
        peak_cellular_load_hz,
        peak_cache_bits: peak_cache as u64,
    })
}
