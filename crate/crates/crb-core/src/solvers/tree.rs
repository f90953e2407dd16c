//! Constrained minimum spanning trees via Kruskal's algorithm.

use crate::error::{Error, Result};
use crate::rising::family;
use crate::solvers::{canonical_value, lex_min_optimal};
use crate::util::UnionFind;

/// Min-cost spanning tree containing every `forced` edge and avoiding the
/// excluded ones; `None` when no such tree exists. Exact by the matroid
/// exchange property: pre-seeding Kruskal with a forced independent set
/// yields the cheapest basis containing it.
fn constrained_best(
    nodes: u32,
    edges: &[(u32, u32)],
    costs: &[f64],
    forced: &[u32],
    excluded: &[bool],
) -> Option<f64> {
    let mut uf = UnionFind::new(nodes);
    let mut total = 0.0;
    let mut picked = 0u32;
    for &j in forced {
        let (u, v) = edges[j as usize];
        if !uf.union(u, v) {
            return None; // forced edges contain a cycle
        }
        total += costs[j as usize];
        picked += 1;
    }
    let mut order: Vec<u32> = (0..edges.len() as u32)
        .filter(|&j| !excluded[j as usize] && !forced.contains(&j))
        .collect();
    order.sort_by(|&a, &b| {
        costs[a as usize]
            .partial_cmp(&costs[b as usize])
            .expect("finite costs")
            .then(a.cmp(&b))
    });
    for j in order {
        if picked + 1 == nodes {
            break;
        }
        let (u, v) = edges[j as usize];
        if uf.union(u, v) {
            total += costs[j as usize];
            picked += 1;
        }
    }
    (picked + 1 == nodes).then_some(total)
}

/// Minimum-cost spanning tree; equal-cost ties resolved to the
/// lexicographically smallest sorted edge-index sequence.
pub(crate) fn lex_min_cost_tree(
    nodes: u32,
    edges: &[(u32, u32)],
    costs: &[f64],
) -> Result<Vec<u32>> {
    let none = vec![false; edges.len()];
    let v_star = constrained_best(nodes, edges, costs, &[], &none)
        .ok_or_else(|| Error::Infeasible("graph is not connected".into()))?;
    lex_min_optimal(
        edges.len() as u32,
        v_star,
        |forced, excluded| constrained_best(nodes, edges, costs, forced, excluded),
        |prefix| {
            family::is_spanning_tree(nodes, edges, prefix)
                .then(|| canonical_value(prefix, costs))
        },
    )
    .ok_or_else(|| Error::Infeasible("tie-broken reconstruction failed".into()))
}
