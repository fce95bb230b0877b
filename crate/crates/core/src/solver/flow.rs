//! Successive-shortest-path min-cost flow with integer capacities and exact
//! rational costs. Shortest paths use a queue-based Bellman-Ford so that
//! negative edge costs are allowed (no negative cycles may be present in the
//! input graph).

use std::collections::VecDeque;

use num_traits::Zero;

use crate::rational::Q;

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    cap: i64,
    cost: Q,
}

#[derive(Clone, Debug, Default)]
pub struct MinCostFlow {
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        MinCostFlow {
            edges: Vec::new(),
            adj: vec![Vec::new(); nodes],
        }
    }

    /// Adds `u -> v` and returns its id; the reverse residual edge is `id ^ 1`.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64, cost: Q) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to: v, cap, cost: cost.clone() });
        self.edges.push(Edge { to: u, cap: 0, cost: -cost });
        self.adj[u].push(id);
        self.adj[v].push(id + 1);
        id
    }

    /// Flow currently carried by edge `id`.
    pub fn flow(&self, id: usize) -> i64 {
        self.edges[id ^ 1].cap
    }

    /// Pushes up to `limit` units from `s` to `t` at minimum cost.
    /// Returns the amount pushed and its cost.
    pub fn run(&mut self, s: usize, t: usize, limit: i64) -> (i64, Q) {
        let n = self.adj.len();
        let mut pushed = 0i64;
        let mut total = Q::zero();
        while pushed < limit {
            let mut dist: Vec<Option<Q>> = vec![None; n];
            let mut prev: Vec<Option<usize>> = vec![None; n];
            let mut in_queue = vec![false; n];
            let mut queue = VecDeque::new();
            dist[s] = Some(Q::zero());
            queue.push_back(s);
            in_queue[s] = true;
            while let Some(u) = queue.pop_front() {
                in_queue[u] = false;
                let du = dist[u].clone().expect("queued nodes have a distance");
                for &e in &self.adj[u] {
                    let edge = &self.edges[e];
                    if edge.cap <= 0 {
                        continue;
                    }
                    let nd = &du + &edge.cost;
                    if dist[edge.to].as_ref().is_none_or(|d| nd < *d) {
                        dist[edge.to] = Some(nd);
                        prev[edge.to] = Some(e);
                        if !in_queue[edge.to] {
                            in_queue[edge.to] = true;
                            queue.push_back(edge.to);
                        }
                    }
                }
            }
            let Some(dt) = dist[t].clone() else {
                break;
            };
            let mut bottleneck = limit - pushed;
            let mut v = t;
            while let Some(e) = prev[v] {
                bottleneck = bottleneck.min(self.edges[e].cap);
                v = self.edges[e ^ 1].to;
            }
            let mut v = t;
            while let Some(e) = prev[v] {
                self.edges[e].cap -= bottleneck;
                self.edges[e ^ 1].cap += bottleneck;
                v = self.edges[e ^ 1].to;
            }
            pushed += bottleneck;
            total += dt * Q::from_integer(bottleneck.into());
        }
        (pushed, total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    #[test]
    fn picks_cheaper_route() {
        let mut g = MinCostFlow::new(4);
        g.add_edge(0, 1, 1, qi(1));
        g.add_edge(0, 2, 1, qi(5));
        let a = g.add_edge(1, 3, 1, q(1, 2));
        g.add_edge(2, 3, 2, qi(0));
        let (f, c) = g.run(0, 3, 2);
        assert_eq!(f, 2);
        assert_eq!(c, q(13, 2));
        assert_eq!(g.flow(a), 1);
    }

    #[test]
    fn handles_negative_edges() {
        let mut g = MinCostFlow::new(3);
        g.add_edge(0, 1, 2, qi(0));
        g.add_edge(1, 2, 1, qi(-10));
        g.add_edge(1, 2, 5, qi(0));
        let (f, c) = g.run(0, 2, 2);
        assert_eq!((f, c), (2, qi(-10)));
    }
}
