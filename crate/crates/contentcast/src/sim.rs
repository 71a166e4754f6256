//! Running planners against a scenario.

use contentcast_core::catalog::check_achievable;
use contentcast_core::sched::{
    evaluate, plan_broadcast_all, plan_converged, plan_unicast, Channels, Environment, SchedError,
};
use contentcast_core::workload::empirical_popularity;
use contentcast_core::{ConvergedConfig, DeliveryPlan, SimReport};

use crate::error::Result;
use crate::scenario::{Scenario, ScenarioReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Planner {
    /// Whole catalog on a broadcast channel of the scenario bandwidth.
    Broadcast,
    /// Every package over a cellular channel of the scenario bandwidth.
    Unicast,
    /// Push list plus unicast, split as the converged config says.
    Converged,
}

impl Planner {
    pub fn name(self) -> &'static str {
        match self {
            Planner::Broadcast => "broadcast",
            Planner::Unicast => "unicast",
            Planner::Converged => "converged",
        }
    }
}

/// Converged config the scenario implies: all bandwidth on the cellular
/// side, the scenario's cache and link rate.
pub fn default_converged(scenario: &Scenario) -> ConvergedConfig {
    ConvergedConfig {
        broadcast_bw_hz: 0.0,
        cellular_bw_hz: scenario.budget.bandwidth_hz,
        cache: scenario.cache,
        link_rate_bps_per_hz: scenario.budget.link_rate_bps_per_hz,
        push_period_s: scenario.budget.horizon_s.min(1.0),
        ..ConvergedConfig::default()
    }
}

/// Plans with `planner` and replays the plan.
///
/// `converged` is only read for [`Planner::Converged`]; its cache and link
/// rate are replaced by the scenario's. The converged planner ranks objects
/// by their empirical request frequency.
pub fn run_planner(
    id: &str,
    scenario: &Scenario,
    planner: Planner,
    converged: &ConvergedConfig,
) -> Result<(DeliveryPlan, ScenarioReport)> {
    let (cat, reqs, b) = (&scenario.catalog, &scenario.requests, &scenario.budget);
    let (plan, channels) = match planner {
        Planner::Broadcast => (
            plan_broadcast_all(cat, b.bandwidth_hz, b.horizon_s, b.link_rate_bps_per_hz),
            Channels::Split { broadcast_hz: b.bandwidth_hz, cellular_hz: 0.0 },
        ),
        Planner::Unicast => (
            plan_unicast(reqs, cat, b.bandwidth_hz, b.link_rate_bps_per_hz)?,
            Channels::Split { broadcast_hz: 0.0, cellular_hz: b.bandwidth_hz },
        ),
        Planner::Converged => {
            let cfg = ConvergedConfig {
                cache: scenario.cache,
                link_rate_bps_per_hz: b.link_rate_bps_per_hz,
                ..*converged
            };
            let pop = empirical_popularity(reqs, cat.len());
            (plan_converged(reqs, cat, &pop, &cfg, b.horizon_s)?, cfg.channels())
        }
    };
    let env = Environment {
        catalog: cat,
        requests: reqs,
        cache: scenario.cache,
        channels,
        horizon_s: b.horizon_s,
        link_rate_bps_per_hz: b.link_rate_bps_per_hz,
    };
    let eval = evaluate(&plan, &env).map_err(SchedError::from)?;
    let total_hz = channels.total_hz();
    let sim = SimReport::from_evaluation(&eval, total_hz * b.horizon_s);
    let satisfied = (0..eval.user_satisfied.len() as u32).filter(|&u| eval.user_satisfied[u as usize]).collect();
    Ok((plan, ScenarioReport::from_sim(id, scenario, total_hz, sim, satisfied)))
}

/// Replays a given plan on the scenario's shared budget.
pub fn check_plan(id: &str, scenario: &Scenario, plan: &DeliveryPlan) -> Result<ScenarioReport> {
    let rate = check_achievable(plan, &scenario.requests, &scenario.catalog, scenario.cache, &scenario.budget)
        .map_err(|e| crate::CliError::config(format!("plan rejected: {e}")))?;
    Ok(ScenarioReport::from_rate(id, scenario, &rate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::ScenarioFile;
    use contentcast_core::CacheSpec;

    fn shared() -> Scenario {
        let file: ScenarioFile = serde_json::from_str(
            r#"{
            "catalog": [{"id": 0, "size_bits": 100}, {"id": 1, "size_bits": 100}],
            "requests": [
                {"user_id": 0, "t_s": 10.0, "objects": [0]},
                {"user_id": 1, "t_s": 10.0, "objects": [0]},
                {"user_id": 2, "t_s": 10.0, "objects": [0, 1]}
            ],
            "budget": {"bandwidth_hz": 40.0, "horizon_s": 10.0},
            "cache_bits": "inf"
        }"#,
        )
        .unwrap();
        file.into_scenario().unwrap()
    }

    #[test]
    fn reference_planners() {
        let sc = shared();
        let (_, b) = run_planner("b", &sc, Planner::Broadcast, &default_converged(&sc)).unwrap();
        assert_eq!((b.n_satisfied, b.delivered_bits), (3, 400));
        assert_eq!(b.content_rate, 1.0);
        let (_, u) = run_planner("u", &sc, Planner::Unicast, &default_converged(&sc)).unwrap();
        assert_eq!((u.n_satisfied, u.delivered_bits), (3, 400));
        let (_, c) = run_planner("c", &sc, Planner::Converged, &default_converged(&sc)).unwrap();
        assert_eq!(c.n_satisfied, 3);
    }

    #[test]
    fn checked_plans_use_the_shared_budget() {
        let mut sc = shared();
        let (plan, _) = run_planner("b", &sc, Planner::Broadcast, &default_converged(&sc)).unwrap();
        assert_eq!(check_plan("b", &sc, &plan).unwrap().n_satisfied, 3);
        sc.cache = CacheSpec::NONE;
        assert_eq!(check_plan("b", &sc, &plan).unwrap().n_satisfied, 0);
        sc.budget.bandwidth_hz = 10.0;
        assert!(check_plan("b", &sc, &plan).is_err());
    }
}
