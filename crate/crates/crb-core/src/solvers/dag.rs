//! Constrained shortest paths on DAGs by dynamic programming in topological
//! order.

use crate::error::{Error, Result};
use crate::rising::family;
use crate::solvers::{canonical_value, lex_min_optimal};

struct Dag<'a> {
    edges: &'a [(u32, u32)],
    /// Out-edge indices per node.
    out: Vec<Vec<u32>>,
    /// Topological order and each node's position in it.
    order: Vec<u32>,
    position: Vec<u32>,
}

impl<'a> Dag<'a> {
    fn new(nodes: u32, edges: &'a [(u32, u32)]) -> Result<Self> {
        let order = family::topological_order(nodes, edges)
            .ok_or_else(|| Error::parameter("graph", "path task requires an acyclic graph"))?;
        let mut position = vec![0u32; nodes as usize];
        for (pos, &v) in order.iter().enumerate() {
            position[v as usize] = pos as u32;
        }
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); nodes as usize];
        for (j, &(u, _)) in edges.iter().enumerate() {
            out[u as usize].push(j as u32);
        }
        Ok(Dag {
            edges,
            out,
            order,
            position,
        })
    }

    /// Min-cost `from -> to` path value avoiding excluded edges; `None` when
    /// unreachable.
    fn segment(&self, costs: &[f64], excluded: &[bool], from: u32, to: u32) -> Option<f64> {
        if from == to {
            return Some(0.0);
        }
        if self.position[from as usize] > self.position[to as usize] {
            return None;
        }
        let mut dist = vec![f64::INFINITY; self.position.len()];
        dist[from as usize] = 0.0;
        let lo = self.position[from as usize] as usize;
        let hi = self.position[to as usize] as usize;
        for &u in &self.order[lo..hi] {
            let du = dist[u as usize];
            if !du.is_finite() {
                continue;
            }
            for &j in &self.out[u as usize] {
                if excluded[j as usize] {
                    continue;
                }
                let v = self.edges[j as usize].1;
                let cand = du + costs[j as usize];
                if cand < dist[v as usize] {
                    dist[v as usize] = cand;
                }
            }
        }
        dist[to as usize].is_finite().then(|| dist[to as usize])
    }

    /// Min cost over paths containing every `forced` edge (sorted by arm
    /// index) and avoiding `excluded` edges.
    fn constrained_best(
        &self,
        costs: &[f64],
        source: u32,
        sink: u32,
        forced: &[u32],
        excluded: &[bool],
    ) -> Option<f64> {
        // Order forced edges along the path; a valid path must traverse them
        // in topological order of their tails, with compatible endpoints.
        let mut chain: Vec<u32> = forced.to_vec();
        chain.sort_unstable_by_key(|&j| self.position[self.edges[j as usize].0 as usize]);
        let mut total = 0.0;
        let mut at = source;
        for &j in &chain {
            let (tail, head) = self.edges[j as usize];
            total += self.segment(costs, excluded, at, tail)?;
            total += costs[j as usize];
            at = head;
        }
        total += self.segment(costs, excluded, at, sink)?;
        Some(total)
    }
}

/// Minimum-cost source-to-sink path; among equal-cost optima, the one whose
/// sorted edge-index sequence is lexicographically smallest.
pub(crate) fn lex_min_cost_path(
    nodes: u32,
    edges: &[(u32, u32)],
    source: u32,
    sink: u32,
    costs: &[f64],
) -> Result<Vec<u32>> {
    let dag = Dag::new(nodes, edges)?;
    let none = vec![false; edges.len()];
    let v_star = dag
        .segment(costs, &none, source, sink)
        .ok_or_else(|| Error::Infeasible("no source-to-sink path".into()))?;
    if source == sink {
        return Err(Error::Infeasible(
            "source equals sink; paths must use at least one edge".into(),
        ));
    }
    lex_min_optimal(
        edges.len() as u32,
        v_star,
        |forced, excluded| dag.constrained_best(costs, source, sink, forced, excluded),
        |prefix| {
            family::is_path(edges, prefix, source, sink)
                .then(|| canonical_value(prefix, costs))
        },
    )
    .ok_or_else(|| Error::Infeasible("tie-broken reconstruction failed".into()))
}
