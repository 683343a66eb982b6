//! Exact integer max-flow (Dinic) used by the fractional-matching check.
//! Capacities are arbitrary-precision integers, so verdicts on scaled
//! rational weights are exact.

use num::bigint::BigInt;
use num::{Signed, Zero};
use std::collections::VecDeque;

#[derive(Debug, Clone)]
struct Edge {
    to: usize,
    cap: BigInt,
    rev: usize,
}

#[derive(Debug, Clone)]
pub struct FlowNetwork {
    adj: Vec<Vec<Edge>>,
    /// (node, slot) of each edge in insertion order, for flow read-back.
    handles: Vec<(usize, usize)>,
    original_caps: Vec<BigInt>,
}

impl FlowNetwork {
    pub fn new(nodes: usize) -> Self {
        FlowNetwork {
            adj: vec![Vec::new(); nodes],
            handles: Vec::new(),
            original_caps: Vec::new(),
        }
    }

    /// Adds a directed edge and returns its handle.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: BigInt) -> usize {
        let fwd = self.adj[from].len();
        let bwd = self.adj[to].len();
        self.adj[from].push(Edge {
            to,
            cap: cap.clone(),
            rev: bwd,
        });
        self.adj[to].push(Edge {
            to: from,
            cap: BigInt::zero(),
            rev: fwd,
        });
        self.handles.push((from, fwd));
        self.original_caps.push(cap);
        self.handles.len() - 1
    }

    pub fn max_flow(&mut self, source: usize, sink: usize) -> BigInt {
        let mut total = BigInt::zero();
        loop {
            let Some(level) = self.bfs_levels(source, sink) else {
                return total;
            };
            let mut iter = vec![0usize; self.adj.len()];
            loop {
                let pushed = self.dfs(source, sink, None, &level, &mut iter);
                if pushed.is_zero() {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn bfs_levels(&self, source: usize, sink: usize) -> Option<Vec<usize>> {
        let mut level = vec![usize::MAX; self.adj.len()];
        level[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adj[u] {
                if level[e.to] == usize::MAX && e.cap.is_positive() {
                    level[e.to] = level[u] + 1;
                    queue.push_back(e.to);
                }
            }
        }
        (level[sink] != usize::MAX).then_some(level)
    }

    fn dfs(
        &mut self,
        u: usize,
        sink: usize,
        limit: Option<BigInt>,
        level: &[usize],
        iter: &mut [usize],
    ) -> BigInt {
        if u == sink {
            // limit is None only at the source, which never equals the sink
            return limit.unwrap();
        }
        while iter[u] < self.adj[u].len() {
            let slot = iter[u];
            let (to, cap, rev) = {
                let e = &self.adj[u][slot];
                (e.to, e.cap.clone(), e.rev)
            };
            if cap.is_positive() && level[to] == level[u] + 1 {
                let next_limit = match &limit {
                    Some(l) => Some(l.min(&cap).clone()),
                    None => Some(cap),
                };
                let pushed = self.dfs(to, sink, next_limit, level, iter);
                if pushed.is_positive() {
                    self.adj[u][slot].cap -= &pushed;
                    self.adj[to][rev].cap += &pushed;
                    return pushed;
                }
            }
            iter[u] += 1;
        }
        BigInt::zero()
    }

    /// Flow carried by an edge handle (capacity minus residual).
    pub fn flow_on(&self, handle: usize) -> BigInt {
        let (node, slot) = self.handles[handle];
        &self.original_caps[handle] - &self.adj[node][slot].cap
    }

    /// Nodes reachable from `source` in the residual graph; after a max
    /// flow this is the source side of a minimum cut.
    pub fn residual_reachable(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for e in &self.adj[u] {
                if !seen[e.to] && e.cap.is_positive() {
                    seen[e.to] = true;
                    queue.push_back(e.to);
                }
            }
        }
        seen
    }
}
