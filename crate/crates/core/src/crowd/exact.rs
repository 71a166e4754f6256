use alloc::vec;
use alloc::vec::Vec;

use super::{compatible, validate_instance, Assignment, CrowdError, SlaOffer, TaskProfile};

struct Edge {
    to: usize,
    cap: u8,
    cost: f64,
}

/// Unit-capacity flow network with paired residual edges.
struct Network {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Self { edges: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cost: f64) {
        self.adj[from].push(self.edges.len());
        self.edges.push(Edge { to, cap: 1, cost });
        self.adj[to].push(self.edges.len());
        self.edges.push(Edge { to: from, cap: 0, cost: -cost });
    }

    /// Cheapest residual path `source -> sink` as a list of edge ids.
    fn shortest_path(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let n = self.adj.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut via = vec![usize::MAX; n];
        dist[source] = 0.0;
        for _ in 0..n {
            let mut changed = false;
            for u in 0..n {
                if dist[u].is_infinite() {
                    continue;
                }
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    let d = dist[u] + edge.cost;
                    // Relative slack keeps float noise from cycling.
                    if edge.cap > 0 && d < dist[edge.to] - 1e-12 * d.abs().max(1.0) {
                        dist[edge.to] = d;
                        via[edge.to] = e;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink].is_infinite() {
            return None;
        }
        let mut path = Vec::new();
        let mut v = sink;
        while v != source {
            let e = via[v];
            path.push(e);
            v = self.edges[e ^ 1].to;
        }
        Some(path)
    }
}

/// Assignment covering the most tasks, and among those the cheapest.
///
/// Solved as a min-cost maximum flow by successive shortest paths, which
/// keeps the flow cheapest at every size. Ties resolve by the input order
/// of tasks and offers, so equal inputs give equal outputs.
pub fn match_exact(tasks: &[TaskProfile], offers: &[SlaOffer]) -> Result<Assignment, CrowdError> {
    validate_instance(tasks, offers)?;
    let (nt, no) = (tasks.len(), offers.len());
    let (source, sink) = (nt + no, nt + no + 1);
    let mut net = Network::new(nt + no + 2);
    for t in 0..nt {
        net.add(source, t, 0.0);
    }
    for (t, task) in tasks.iter().enumerate() {
        for (o, offer) in offers.iter().enumerate() {
            if compatible(task, offer) {
                net.add(t, nt + o, offer.expense);
            }
        }
    }
    for o in 0..no {
        net.add(nt + o, sink, 0.0);
    }

    while let Some(path) = net.shortest_path(source, sink) {
        for e in path {
            net.edges[e].cap -= 1;
            net.edges[e ^ 1].cap += 1;
        }
    }

    let mut pairs = Vec::new();
    for t in 0..nt {
        for &e in &net.adj[t] {
            let edge = &net.edges[e];
            if e % 2 == 0 && edge.to >= nt && edge.to < nt + no && edge.cap == 0 {
                pairs.push((t, edge.to - nt));
            }
        }
    }
    Ok(Assignment::from_pairs(pairs, tasks, offers))
}

#[cfg(test)]
mod tests {
    use super::super::testing::*;
    use super::super::validate_assignment;
    use super::*;
    use std::vec;

    /// Best (coverage, -expense) over every partial one-to-one matching.
    fn brute_force(tasks: &[TaskProfile], offers: &[SlaOffer]) -> (usize, f64) {
        fn go(t: usize, used: &mut [bool], tasks: &[TaskProfile], offers: &[SlaOffer], cov: usize, cost: f64, best: &mut (usize, f64)) {
            if t == tasks.len() {
                if cov > best.0 || (cov == best.0 && cost < best.1) {
                    *best = (cov, cost);
                }
                return;
            }
            go(t + 1, used, tasks, offers, cov, cost, best);
            for o in 0..offers.len() {
                if !used[o] && compatible(&tasks[t], &offers[o]) {
                    used[o] = true;
                    go(t + 1, used, tasks, offers, cov + 1, cost + offers[o].expense, best);
                    used[o] = false;
                }
            }
        }
        let mut best = (0, 0.0);
        go(0, &mut vec![false; offers.len()], tasks, offers, 0, 0.0, &mut best);
        best
    }

    #[test]
    fn single_feasible_offer() {
        let a = match_exact(&[task(0, 5.0, 10.0)], &[offer(7, 5.0, 8.0)]).unwrap();
        assert_eq!(a.coverage(), 1);
        assert_eq!(a.pairs[0].offer_id, 7);
        assert_eq!(a.total_expense, 8.0);
    }

    #[test]
    fn over_budget_offer_is_unused() {
        let a = match_exact(&[task(0, 5.0, 10.0)], &[offer(0, 5.0, 11.0)]).unwrap();
        assert_eq!(a, Assignment::default());
    }

    #[test]
    fn reroutes_to_cover_more_tasks() {
        // Greedy cheapest-first for task 0 would take offer 0 and strand task 1.
        let tasks = [task(0, 1.0, 10.0), task(1, 1.0, 10.0)];
        let mut offers = vec![offer(0, 1.0, 1.0), offer(1, 1.0, 5.0)];
        offers[0].object_id = Some(0);
        offers[1].object_id = Some(1);
        let mut t1 = tasks[1].clone();
        t1.object_id = 1;
        let tasks = vec![tasks[0].clone(), t1];
        let a = match_exact(&tasks, &offers).unwrap();
        assert_eq!(a.coverage(), 2);
        assert_eq!(a.total_expense, 6.0);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = |m: u64| {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            seed % m
        };
        for _ in 0..500 {
            let nt = next(5) as usize + 1;
            let no = next(5) as usize + 1;
            let tasks: std::vec::Vec<_> = (0..nt)
                .map(|i| TaskProfile { object_id: next(3) as u32, ..task(i as u32, (next(5) + 1) as f64, next(10) as f64) })
                .collect();
            let offers: std::vec::Vec<_> = (0..no)
                .map(|i| SlaOffer {
                    object_id: if next(2) == 0 { None } else { Some(next(3) as u32) },
                    ..offer(i as u32, (next(5) + 1) as f64, next(10) as f64)
                })
                .collect();
            let a = match_exact(&tasks, &offers).unwrap();
            validate_assignment(&tasks, &offers, &a).unwrap();
            assert_eq!((a.coverage(), a.total_expense), brute_force(&tasks, &offers));
        }
    }
}
