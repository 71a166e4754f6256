mod common;

use common::{random_scenario, Rng};
use contentcast_core::catalog::{bandwidth_lower_bound, bandwidth_upper_bound, check_achievable};
use contentcast_core::sched::{
    plan_broadcast_all, plan_converged, plan_unicast, simulate, users_per_cell, CapacityProbe,
    ChannelBudgets,
};
use contentcast_core::workload::{empirical_popularity, generate_catalog, TraceConfig, ZipfParams};
use contentcast_core::{CacheSpec, ConvergedConfig, DeliveryPlan, WirelessBudget};

fn budgets(b: f64, c: f64) -> ChannelBudgets {
    ChannelBudgets { broadcast_hz: b, cellular_hz: c, link_rate_bps_per_hz: 1.0 }
}

#[test]
fn reference_plans_attain_the_bounds() {
    let mut rng = Rng::new(10);
    for _ in 0..500 {
        let s = random_scenario(&mut rng, true);
        let t = s.horizon_s;
        let b_min = bandwidth_lower_bound(&s.catalog, t).unwrap();
        let bc = simulate(
            &plan_broadcast_all(&s.catalog, b_min, t, 1.0),
            &s.requests,
            &s.catalog,
            CacheSpec::Infinite,
            budgets(b_min, 0.0),
            t,
        )
        .unwrap();
        assert!(bc.all_satisfied());
        assert_eq!(bc.broadcast_bits, s.catalog.total_bits());

        let b_max = bandwidth_upper_bound(&s.requests, &s.catalog, t).unwrap();
        let uc = simulate(
            &plan_unicast(&s.requests, &s.catalog, b_max, 1.0).unwrap(),
            &s.requests,
            &s.catalog,
            CacheSpec::NONE,
            budgets(0.0, b_max),
            t,
        )
        .unwrap();
        assert!(uc.all_satisfied());
        assert!((uc.content_rate - 1.0).abs() <= 1e-12);

        // A hair less bandwidth loses somebody in both plans.
        let b = b_min * (1.0 - 1e-6);
        let short = simulate(
            &plan_broadcast_all(&s.catalog, b, t, 1.0),
            &s.requests,
            &s.catalog,
            CacheSpec::Infinite,
            budgets(b, 0.0),
            t,
        )
        .unwrap();
        assert!(!short.all_satisfied());
        let b = b_max * (1.0 - 1e-6);
        let short = simulate(
            &plan_unicast(&s.requests, &s.catalog, b, 1.0).unwrap(),
            &s.requests,
            &s.catalog,
            CacheSpec::NONE,
            budgets(0.0, b),
            t,
        )
        .unwrap();
        assert!(!short.all_satisfied());
    }
}

#[test]
fn unicast_bits_match_satisfied_packages() {
    let mut rng = Rng::new(11);
    for _ in 0..500 {
        let s = random_scenario(&mut rng, false);
        let bc = rng.range(1, 200) as f64;
        let plan = plan_unicast(&s.requests, &s.catalog, bc, 1.0).unwrap();
        let rep = simulate(&plan, &s.requests, &s.catalog, CacheSpec::NONE, budgets(0.0, bc), s.horizon_s).unwrap();
        // Every package the scheduler keeps is delivered in time.
        assert_eq!(rep.unicast_bits, rep.delivered_bits);
        assert_eq!(rep.unicast_delivered_bits, rep.delivered_bits);
        assert_eq!(rep.cache_hit_bits, 0);
    }
}

#[test]
fn empty_plan_delivers_nothing() {
    let mut rng = Rng::new(12);
    let s = random_scenario(&mut rng, false);
    let rep = simulate(&DeliveryPlan::default(), &s.requests, &s.catalog, CacheSpec::Infinite, budgets(1.0, 1.0), s.horizon_s)
        .unwrap();
    assert_eq!((rep.satisfied, rep.delivered_bits, rep.content_rate), (0, 0, 0.0));
}

fn converged_cfg(rng: &mut Rng, horizon_s: f64) -> ConvergedConfig {
    ConvergedConfig {
        broadcast_bw_hz: rng.range(1, 200) as f64,
        cellular_bw_hz: rng.range(0, 200) as f64,
        cache: if rng.coin() { CacheSpec::Infinite } else { CacheSpec::Finite(rng.range(0, 2000)) },
        pet_enabled: rng.range(0, 3) == 0,
        push_period_s: horizon_s * (0.1 + 0.9 * rng.unit()),
        pet_packets: rng.range(1, 12) as usize,
        ..ConvergedConfig::default()
    }
}

#[test]
fn converged_conservation_and_validity() {
    let mut rng = Rng::new(13);
    for _ in 0..500 {
        let s = random_scenario(&mut rng, false);
        let cfg = converged_cfg(&mut rng, s.horizon_s);
        let pop = empirical_popularity(&s.requests, s.catalog.len());
        let plan = plan_converged(&s.requests, &s.catalog, &pop, &cfg, s.horizon_s).unwrap();
        let rep = simulate(
            &plan,
            &s.requests,
            &s.catalog,
            cfg.cache,
            budgets(cfg.broadcast_bw_hz, cfg.cellular_bw_hz),
            s.horizon_s,
        )
        .unwrap();
        assert_eq!(rep.cache_hit_bits + rep.unicast_delivered_bits, rep.delivered_bits);
        assert!(rep.peak_broadcast_load_hz <= cfg.broadcast_bw_hz * (1.0 + 1e-9));
        assert!(rep.peak_cellular_load_hz <= cfg.cellular_bw_hz * (1.0 + 1e-9));
        if let CacheSpec::Finite(m) = cfg.cache {
            assert!(rep.peak_cache_bits <= m);
        }
    }
}

#[test]
fn zero_broadcast_converged_is_unicast() {
    let mut rng = Rng::new(14);
    for _ in 0..300 {
        let s = random_scenario(&mut rng, false);
        let cfg = ConvergedConfig { broadcast_bw_hz: 0.0, ..converged_cfg(&mut rng, s.horizon_s) };
        let pop = empirical_popularity(&s.requests, s.catalog.len());
        let conv = plan_converged(&s.requests, &s.catalog, &pop, &cfg, s.horizon_s).unwrap();
        assert_eq!(conv, plan_unicast(&s.requests, &s.catalog, cfg.cellular_bw_hz, 1.0).unwrap());
    }
}

#[test]
fn converged_rate_dominates_at_equal_service() {
    // Both plans get the same total bandwidth.
    let mut rng = Rng::new(15);
    for _ in 0..500 {
        let s = random_scenario(&mut rng, false);
        let mut cfg = converged_cfg(&mut rng, s.horizon_s);
        cfg.pet_enabled = false;
        cfg.cache = CacheSpec::Infinite;
        cfg.push_period_s = s.horizon_s;
        let total = cfg.broadcast_bw_hz + cfg.cellular_bw_hz;
        let pop = empirical_popularity(&s.requests, s.catalog.len());
        let conv = plan_converged(&s.requests, &s.catalog, &pop, &cfg, s.horizon_s).unwrap();
        let conv = simulate(&conv, &s.requests, &s.catalog, cfg.cache, budgets(cfg.broadcast_bw_hz, cfg.cellular_bw_hz), s.horizon_s)
            .unwrap();
        let uni = plan_unicast(&s.requests, &s.catalog, total, 1.0).unwrap();
        let uni = simulate(&uni, &s.requests, &s.catalog, CacheSpec::NONE, budgets(0.0, total), s.horizon_s).unwrap();
        if conv.satisfied == uni.satisfied && conv.delivered_bits == uni.delivered_bits {
            assert!(conv.content_rate >= uni.content_rate);
        }
    }
}

#[test]
fn shared_channel_checker_agrees_with_split_replay() {
    let mut rng = Rng::new(16);
    for _ in 0..300 {
        let s = random_scenario(&mut rng, true);
        let b_min = bandwidth_lower_bound(&s.catalog, s.horizon_s).unwrap();
        let plan = plan_broadcast_all(&s.catalog, b_min, s.horizon_s, 1.0);
        let budget = WirelessBudget::unit_rate(b_min, s.horizon_s).unwrap();
        let rep = check_achievable(&plan, &s.requests, &s.catalog, CacheSpec::Infinite, &budget).unwrap();
        assert!(rep.unsatisfied_users.is_empty());
        let sim = simulate(&plan, &s.requests, &s.catalog, CacheSpec::Infinite, budgets(b_min, 0.0), s.horizon_s).unwrap();
        assert_eq!(rep.delivered_bits, sim.delivered_bits);
        assert_eq!(rep.content_rate, sim.content_rate);
    }
}

fn probe(cfg: ConvergedConfig, s: f64) -> CapacityProbe {
    CapacityProbe {
        catalog: generate_catalog(40, 100).unwrap(),
        zipf: ZipfParams { exponent_s: s, n_items: 40 },
        trace: TraceConfig { horizon_s: 20.0, earliest_request_s: 10.0, seed: 99, ..TraceConfig::default() },
        sched: cfg,
        trials: 20,
        k_max: 256,
        pass_fraction: CapacityProbe::DEFAULT_PASS_FRACTION,
    }
}

#[test]
fn capacity_is_monotone_in_each_knob() {
    let base = ConvergedConfig {
        broadcast_bw_hz: 20.0,
        cellular_bw_hz: 40.0,
        push_period_s: 5.0,
        cache: CacheSpec::Finite(500),
        ..ConvergedConfig::default()
    };
    let cap = |cfg: ConvergedConfig, s: f64| users_per_cell(&probe(cfg, s)).unwrap().k_supported;
    let series = |f: &dyn Fn(usize) -> (ConvergedConfig, f64)| (0..4).map(|i| cap(f(i).0, f(i).1)).collect::<Vec<_>>();
    let checks: [(&str, Vec<usize>); 4] = [
        ("B_b", series(&|i| (ConvergedConfig { broadcast_bw_hz: 20.0 * i as f64, ..base }, 1.0))),
        ("B_c", series(&|i| (ConvergedConfig { cellular_bw_hz: 20.0 + 20.0 * i as f64, ..base }, 1.0))),
        ("M", series(&|i| (ConvergedConfig { cache: CacheSpec::Finite(200 * i as u64), ..base }, 1.0))),
        ("s", series(&|i| (base, 0.5 * i as f64))),
    ];
    for (name, ks) in checks {
        assert!(ks.windows(2).all(|w| w[0] <= w[1]), "{name}: {ks:?}");
    }
}
