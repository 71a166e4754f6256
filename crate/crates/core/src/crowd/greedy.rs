use alloc::vec;
use alloc::vec::Vec;

use super::{compatible, validate_instance, Assignment, CrowdError, SlaOffer, TaskProfile};

/// Tasks in descending `resource_needed` (then task id) each take the
/// cheapest compatible unused offer (then lowest offer id).
///
/// The result is a maximal matching, so it covers at least half as many
/// tasks as [`match_exact`](super::match_exact).
pub fn match_greedy(tasks: &[TaskProfile], offers: &[SlaOffer]) -> Result<Assignment, CrowdError> {
    validate_instance(tasks, offers)?;
    let mut order: Vec<usize> = (0..tasks.len()).collect();
    order.sort_by(|&a, &b| {
        tasks[b]
            .resource_needed
            .total_cmp(&tasks[a].resource_needed)
            .then(tasks[a].task_id.cmp(&tasks[b].task_id))
    });
    let mut used = vec![false; offers.len()];
    let mut pairs = Vec::new();
    for t in order {
        let best = (0..offers.len())
            .filter(|&o| !used[o] && compatible(&tasks[t], &offers[o]))
            .min_by(|&a, &b| {
                offers[a]
                    .expense
                    .total_cmp(&offers[b].expense)
                    .then(offers[a].offer_id.cmp(&offers[b].offer_id))
            });
        if let Some(o) = best {
            used[o] = true;
            pairs.push((t, o));
        }
    }
    Ok(Assignment::from_pairs(pairs, tasks, offers))
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::super::{match_exact, validate_assignment};
    use super::*;
    use std::vec;

    #[test]
    fn largest_task_first_cheapest_offer() {
        let tasks = vec![task(0, 1.0, 10.0), task(1, 5.0, 10.0)];
        let offers = vec![offer(0, 5.0, 3.0), offer(1, 5.0, 2.0), offer(2, 1.0, 1.0)];
        let a = match_greedy(&tasks, &offers).unwrap();
        let pairs: std::vec::Vec<_> = a.pairs.iter().map(|p| (p.task_id, p.offer_id)).collect();
        assert_eq!(pairs, vec![(0, 2), (1, 1)]);
        assert_eq!(a.total_expense, 3.0);
    }

    #[test]
    fn forced_matching_equals_exact() {
        let tasks: std::vec::Vec<_> =
            (0..4).map(|i| TaskProfile { object_id: i, ..task(i, 1.0 + i as f64, 10.0) }).collect();
        let offers: std::vec::Vec<_> =
            (0..4).map(|i| SlaOffer { object_id: Some(i), ..offer(10 + i, 9.0, i as f64) }).collect();
        assert_eq!(match_greedy(&tasks, &offers).unwrap(), match_exact(&tasks, &offers).unwrap());
    }

    #[test]
    fn greedy_is_valid_and_half_optimal() {
        let mut seed = 0xD1B54A32D192ED03u64;
        let mut next = |m: u64| {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed % m
        };
        for _ in 0..1000 {
            let tasks: std::vec::Vec<_> = (0..10)
                .map(|i| TaskProfile { object_id: next(4) as u32, ..task(i, (next(8) + 1) as f64, next(12) as f64) })
                .collect();
            let offers: std::vec::Vec<_> = (0..10)
                .map(|i| SlaOffer {
                    object_id: if next(3) == 0 { None } else { Some(next(4) as u32) },
                    ..offer(i, (next(8) + 1) as f64, next(12) as f64)
                })
                .collect();
            let g = match_greedy(&tasks, &offers).unwrap();
            let e = match_exact(&tasks, &offers).unwrap();
            validate_assignment(&tasks, &offers, &g).unwrap();
            assert!(2 * g.coverage() >= e.coverage());
            assert!(e.coverage() >= g.coverage());
            if e.coverage() == g.coverage() {
                assert!(e.total_expense <= g.total_expense);
            }
        }
    }
}
