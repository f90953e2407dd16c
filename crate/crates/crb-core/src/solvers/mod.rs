//! Task-specific combinatorial solvers and enumeration utilities.
//!
//! [`solve`] maps per-base-arm weights to the best member of a
//! [`SuperArmFamily`]: maximize the weight sum, or for minimize-sense tasks
//! the cost sum with per-arm cost `1 - weight`. Ties are broken by the
//! lexicographically smallest sorted arm-index sequence; this is implemented
//! exactly, by growing the answer index-by-index against a constrained value
//! oracle rather than relying on any particular algorithm's visit order.

mod dag;
mod enumerate;
mod matching;
mod tree;

pub use enumerate::enumerate_super_arms;

use crate::error::{Error, Result};
use crate::rising::{FamilyRepr, GraphTask, Sense, SuperArmFamily};

/// Weights at or above this value are forced-exploration markers: they bypass
/// the usual clamps and strictly dominate any clamped finite weight.
pub const DOMINANT_WEIGHT: f64 = 4.0;

/// Per-base-arm weights, index-aligned with the instance arms.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::parameter("weights", "must all be finite"));
        }
        Ok(WeightVector(weights))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
}

/// Relative closeness used when asking "does this branch still achieve the
/// optimal value": sums of identical floats associated differently can
/// drift by a few ulps.
pub(crate) fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Value of a candidate set under per-arm values, summed in index order so
/// identical sets always produce identical floats.
pub(crate) fn canonical_value(set: &[u32], per_arm: &[f64]) -> f64 {
    set.iter().map(|&j| per_arm[j as usize]).sum()
}

/// Grows the lexicographically smallest optimal member index-by-index.
///
/// `constrained_best(forced_in, excluded)` returns the best achievable value
/// of any member containing all of `forced_in` and none of the excluded
/// arms, or `None` when no such member exists. `complete(prefix)` returns the
/// canonical value when the prefix alone is already a member.
pub(crate) fn lex_min_optimal<FB, FC>(
    arm_count: u32,
    v_star: f64,
    mut constrained_best: FB,
    mut complete: FC,
) -> Option<Vec<u32>>
where
    FB: FnMut(&[u32], &[bool]) -> Option<f64>,
    FC: FnMut(&[u32]) -> Option<f64>,
{
    let mut prefix: Vec<u32> = Vec::new();
    let mut excluded = vec![false; arm_count as usize];
    loop {
        // A strict prefix sorts before every extension, so stop as soon as
        // the prefix itself is an optimal member.
        if let Some(v) = complete(&prefix) {
            if close(v, v_star) {
                return Some(prefix);
            }
        }
        let start = prefix.last().map_or(0, |&l| l + 1);
        let mut advanced = false;
        for j in start..arm_count {
            prefix.push(j);
            match constrained_best(&prefix, &excluded) {
                Some(v) if close(v, v_star) => {
                    advanced = true;
                    break;
                }
                _ => {
                    // No optimal member has j as its next index, and by
                    // sortedness none can contain j at all.
                    prefix.pop();
                    excluded[j as usize] = true;
                }
            }
        }
        if !advanced {
            return None;
        }
    }
}

fn effective_gains(weights: &[f64], k: usize) -> Vec<f64> {
    weights[..k]
        .iter()
        .map(|&w| if w >= DOMINANT_WEIGHT { w } else { w.clamp(0.0, 2.0) })
        .collect()
}

fn effective_costs(weights: &[f64], k: usize) -> Vec<f64> {
    weights[..k]
        .iter()
        .map(|&w| {
            if w >= DOMINANT_WEIGHT {
                1.0 - w
            } else {
                1.0 - w.clamp(0.0, 1.0)
            }
        })
        .collect()
}

/// Best super arm for the given weights: `argmax sum w_i` (maximize sense) or
/// `argmin sum (1 - w_i)` (minimize sense), ties broken lexicographically.
pub fn solve(family: &SuperArmFamily, weights: &WeightVector) -> Result<Vec<u32>> {
    let k = family.arm_span();
    if weights.as_slice().len() < k {
        return Err(Error::parameter(
            "weights",
            format!("family spans {k} arms, got {}", weights.as_slice().len()),
        ));
    }
    match family.repr() {
        FamilyRepr::Explicit { subsets } => {
            let per_arm = match family.sense() {
                Sense::Maximize => effective_gains(weights.as_slice(), k),
                Sense::Minimize => effective_costs(weights.as_slice(), k),
            };
            let better = |a: f64, b: f64| match family.sense() {
                Sense::Maximize => a > b,
                Sense::Minimize => a < b,
            };
            let mut best: Option<(&Vec<u32>, f64)> = None;
            for s in subsets {
                let v = canonical_value(s, &per_arm);
                // Subsets are stored in lex order; strict improvement keeps
                // the lex-smallest among exact ties.
                if best.is_none_or(|(_, bv)| better(v, bv)) {
                    best = Some((s, v));
                }
            }
            Ok(best.expect("explicit families are nonempty").0.clone())
        }
        FamilyRepr::Graph { graph } => match graph {
            GraphTask::DagShortestPath {
                nodes,
                edges,
                source,
                sink,
            } => {
                let costs = effective_costs(weights.as_slice(), k);
                dag::lex_min_cost_path(*nodes, edges, *source, *sink, &costs)
            }
            GraphTask::SpanningTree { nodes, edges } => {
                let costs = effective_costs(weights.as_slice(), k);
                tree::lex_min_cost_tree(*nodes, edges, &costs)
            }
            GraphTask::BipartiteMatching { left, right, edges } => {
                let gains = effective_gains(weights.as_slice(), k);
                matching::lex_max_weight_maximal_matching(*left, *right, edges, &gains)
            }
        },
    }
}

/// Minimum-cost source-to-sink path of a DAG under nonnegative edge costs.
pub fn dag_shortest_path(
    nodes: u32,
    edges: &[(u32, u32)],
    source: u32,
    sink: u32,
    costs: &[f64],
) -> Result<Vec<u32>> {
    check_costs(costs, edges.len())?;
    dag::lex_min_cost_path(nodes, edges, source, sink, costs)
}

/// Minimum-cost spanning tree of a connected undirected graph.
pub fn kruskal_mst(nodes: u32, edges: &[(u32, u32)], costs: &[f64]) -> Result<Vec<u32>> {
    check_costs(costs, edges.len())?;
    tree::lex_min_cost_tree(nodes, edges, costs)
}

/// Maximum-total-weight matching of a bipartite graph, returned as a maximal
/// matching (weights are floored at zero, so maximality never costs value).
pub fn max_weight_bipartite_matching(
    left: u32,
    right: u32,
    edges: &[(u32, u32)],
    weights: &[f64],
) -> Result<Vec<u32>> {
    if weights.len() != edges.len() || weights.iter().any(|w| !w.is_finite()) {
        return Err(Error::parameter(
            "weights",
            "need one finite weight per edge",
        ));
    }
    let gains: Vec<f64> = weights.iter().map(|&w| w.max(0.0)).collect();
    matching::lex_max_weight_maximal_matching(left, right, edges, &gains)
}

fn check_costs(costs: &[f64], edges: usize) -> Result<()> {
    if costs.len() != edges {
        return Err(Error::parameter("costs", "need one cost per edge"));
    }
    if costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
        return Err(Error::parameter("costs", "must be finite and nonnegative"));
    }
    Ok(())
}
