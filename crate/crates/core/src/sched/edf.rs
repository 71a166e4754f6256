//! Cellular scheduling of residual packages.
//!
//! All packages are known up front and due at their request time. The
//! Moore-Hodgson rule picks the largest set that can finish on time on one
//! link, and that set is sent earliest-deadline-first, back to back, each
//! transmission using the whole cellular bandwidth.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use super::plan::UnicastAction;
use crate::num::approx_le;

/// A package still owed to a user over the cellular channel.
#[derive(Debug, Clone)]
pub(crate) struct Job {
    pub(crate) user: u32,
    pub(crate) deadline: f64,
    /// Objects to unicast with their sizes, in transmission order.
    pub(crate) objects: Vec<(u32, u64)>,
}

impl Job {
    fn bits(&self) -> u64 {
        self.objects.iter().map(|o| o.1).sum()
    }
}

pub(crate) fn schedule(mut jobs: Vec<Job>, cellular_hz: f64, link_rate: f64) -> Vec<UnicastAction> {
    let rate = cellular_hz * link_rate;
    jobs.retain(|j| j.bits() > 0);
    if !(rate > 0.0) || jobs.is_empty() {
        return Vec::new();
    }
    // Stable sort keeps input order among equal deadlines and users.
    jobs.sort_by(|a, b| a.deadline.total_cmp(&b.deadline).then(a.user.cmp(&b.user)));

    let mut accepted = vec![true; jobs.len()];
    let mut heap: BinaryHeap<(u64, usize)> = BinaryHeap::new();
    let mut total = 0u64;
    for (i, job) in jobs.iter().enumerate() {
        let bits = job.bits();
        heap.push((bits, i));
        total += bits;
        if !approx_le(total as f64 / rate, job.deadline) {
            let (dropped_bits, dropped) = heap.pop().expect("heap holds the job just pushed");
            total -= dropped_bits;
            accepted[dropped] = false;
        }
    }

    let mut actions = Vec::new();
    let mut cum = 0u64;
    for (job, _) in jobs.iter().zip(&accepted).filter(|(_, ok)| **ok) {
        for &(object_id, bits) in &job.objects {
            let start_s = cum as f64 / rate;
            cum += bits;
            let end_s = cum as f64 / rate;
            actions.push(UnicastAction {
                user_id: job.user,
                object_id,
                start_s,
                duration_s: end_s - start_s,
                bandwidth_hz: cellular_hz,
            });
        }
    }
    actions
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(user: u32, deadline: f64, bits: u64) -> Job {
        Job { user, deadline, objects: std::vec![(user, bits)] }
    }

    // Brute force: largest subset that is feasible when sent EDF.
    fn best_count(jobs: &[Job], rate: f64) -> usize {
        let n = jobs.len();
        let mut best = 0;
        for mask in 0u32..(1 << n) {
            let mut chosen: std::vec::Vec<&Job> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &jobs[i]).collect();
            chosen.sort_by(|a, b| a.deadline.total_cmp(&b.deadline));
            let mut t = 0u64;
            let ok = chosen.iter().all(|j| {
                t += j.bits();
                t as f64 / rate <= j.deadline + 1e-9
            });
            if ok {
                best = best.max(chosen.len());
            }
        }
        best
    }

    #[test]
    fn exact_fit() {
        let acts = schedule(std::vec![job(0, 10.0, 100)], 10.0, 1.0);
        assert_eq!(acts.len(), 1);
        assert_eq!((acts[0].start_s, acts[0].duration_s), (0.0, 10.0));
    }

    #[test]
    fn drops_the_long_job() {
        // 100 bits fit by t = 10 s; keeping the 95-bit job would cost two users.
        let jobs = std::vec![job(0, 10.0, 95), job(1, 10.0, 10), job(2, 10.0, 10)];
        let acts = schedule(jobs, 10.0, 1.0);
        let users: std::vec::Vec<u32> = acts.iter().map(|a| a.user_id).collect();
        assert_eq!(users, std::vec![1, 2]);
    }

    #[test]
    fn zero_rate_sends_nothing() {
        assert!(schedule(std::vec![job(0, 10.0, 1)], 0.0, 1.0).is_empty());
    }

    #[test]
    fn matches_brute_force() {
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed
        };
        for _ in 0..300 {
            let n = (next() % 8) as usize + 1;
            let jobs: std::vec::Vec<Job> = (0..n)
                .map(|u| job(u as u32, (next() % 100 + 1) as f64, next() % 300 + 1))
                .collect();
            let acts = schedule(jobs.clone(), 7.0, 1.0);
            assert_eq!(acts.len(), best_count(&jobs, 7.0));
            for a in &acts {
                let j = &jobs[a.user_id as usize];
                assert!(a.start_s + a.duration_s <= j.deadline + 1e-9);
            }
        }
    }
}
