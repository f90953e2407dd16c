//! Super-arm families: explicit subset lists or structured graph tasks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::UnionFind;

/// Objective sense of the combinatorial task. `Minimize` is used with
/// per-arm cost `1 - outcome` (shortest path, spanning tree); `Maximize`
/// sums outcomes directly (matching, explicit families).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sense {
    Maximize,
    Minimize,
}

/// A structured combinatorial task. Base arm `j` is edge `j` of the task
/// graph, so the number of arms always equals the number of edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "task", rename_all = "snake_case")]
pub enum GraphTask {
    /// All directed source-to-sink paths of an acyclic graph.
    DagShortestPath {
        nodes: u32,
        edges: Vec<(u32, u32)>,
        source: u32,
        sink: u32,
    },
    /// All spanning trees of a connected undirected graph.
    SpanningTree { nodes: u32, edges: Vec<(u32, u32)> },
    /// All maximal matchings of a bipartite graph. Edges are
    /// (left index, right index) pairs.
    BipartiteMatching {
        left: u32,
        right: u32,
        edges: Vec<(u32, u32)>,
    },
}

impl GraphTask {
    pub fn edge_count(&self) -> usize {
        match self {
            GraphTask::DagShortestPath { edges, .. }
            | GraphTask::SpanningTree { edges, .. }
            | GraphTask::BipartiteMatching { edges, .. } => edges.len(),
        }
    }
}

/// Representation of the feasible set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FamilyRepr {
    Graph { graph: GraphTask },
    Explicit { subsets: Vec<Vec<u32>> },
}

/// The feasible set of super arms with its objective sense and the maximal
/// super-arm size `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuperArmFamily {
    #[serde(flatten)]
    repr: FamilyRepr,
    sense: Sense,
    max_size: u32,
}

impl SuperArmFamily {
    /// Builds an explicit family. Subsets are normalized (sorted, entries and
    /// duplicates removed); empty subsets are rejected.
    pub fn explicit(subsets: Vec<Vec<u32>>, sense: Sense) -> Result<Self> {
        if subsets.is_empty() {
            return Err(Error::parameter("subsets", "family must be nonempty"));
        }
        let mut normalized: Vec<Vec<u32>> = Vec::with_capacity(subsets.len());
        for mut s in subsets {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::parameter("subsets", "super arms must be nonempty"));
            }
            normalized.push(s);
        }
        normalized.sort();
        normalized.dedup();
        let max_size = normalized.iter().map(|s| s.len()).max().unwrap_or(0) as u32;
        Ok(SuperArmFamily {
            repr: FamilyRepr::Explicit {
                subsets: normalized,
            },
            sense,
            max_size,
        })
    }

    /// Builds a graph-task family, checking structural sanity (index ranges,
    /// acyclicity for DAG tasks) and computing the size bound `L`.
    pub fn graph(task: GraphTask, sense: Sense) -> Result<Self> {
        let max_size = match &task {
            GraphTask::DagShortestPath {
                nodes,
                edges,
                source,
                sink,
            } => {
                if source >= nodes || sink >= nodes {
                    return Err(Error::parameter("graph", "source/sink out of range"));
                }
                if edges.iter().any(|&(u, v)| u >= *nodes || v >= *nodes) {
                    return Err(Error::parameter("graph", "edge endpoint out of range"));
                }
                let order = topological_order(*nodes, edges).ok_or_else(|| {
                    Error::parameter("graph", "shortest-path task graph must be acyclic")
                })?;
                longest_path_edges(*nodes, edges, &order, *source, *sink)
            }
            GraphTask::SpanningTree { nodes, edges } => {
                if *nodes < 1 {
                    return Err(Error::parameter("graph", "need at least one node"));
                }
                if edges.iter().any(|&(u, v)| u >= *nodes || v >= *nodes || u == v) {
                    return Err(Error::parameter(
                        "graph",
                        "edge endpoint out of range or self-loop",
                    ));
                }
                nodes - 1
            }
            GraphTask::BipartiteMatching { left, right, edges } => {
                if edges.iter().any(|&(u, v)| u >= *left || v >= *right) {
                    return Err(Error::parameter("graph", "edge endpoint out of range"));
                }
                if sense == Sense::Minimize {
                    return Err(Error::parameter(
                        "sense",
                        "matching tasks maximize summed outcomes; the 1-outcome cost \
                         transform applies to paths and spanning trees only",
                    ));
                }
                (*left).min(*right)
            }
        };
        Ok(SuperArmFamily {
            repr: FamilyRepr::Graph { graph: task },
            sense,
            max_size,
        })
    }

    pub fn repr(&self) -> &FamilyRepr {
        &self.repr
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// `L`: the maximal super-arm size (exact for explicit families and
    /// spanning trees, an upper bound for paths and matchings).
    pub fn max_size(&self) -> u32 {
        self.max_size
    }

    /// Number of base arms the family spans (edge count for graph tasks,
    /// highest referenced index + 1 for explicit lists).
    pub fn arm_span(&self) -> usize {
        match &self.repr {
            FamilyRepr::Graph { graph } => graph.edge_count(),
            FamilyRepr::Explicit { subsets } => subsets
                .iter()
                .flat_map(|s| s.iter())
                .max()
                .map_or(0, |&m| m as usize + 1),
        }
    }

    /// Membership test: `super_arm` must be sorted and satisfy the structural
    /// predicate of the task (exact subset / s-t path / spanning tree /
    /// maximal matching).
    pub fn contains(&self, super_arm: &[u32]) -> bool {
        if super_arm.is_empty() && !matches!(self.repr, FamilyRepr::Graph { graph: GraphTask::BipartiteMatching { .. } })
        {
            return false;
        }
        if super_arm.windows(2).any(|w| w[0] >= w[1]) {
            return false;
        }
        match &self.repr {
            FamilyRepr::Explicit { subsets } => {
                subsets.binary_search_by(|s| s.as_slice().cmp(super_arm)).is_ok()
            }
            FamilyRepr::Graph { graph } => match graph {
                GraphTask::DagShortestPath {
                    edges,
                    source,
                    sink,
                    ..
                } => is_path(edges, super_arm, *source, *sink),
                GraphTask::SpanningTree { nodes, edges } => {
                    is_spanning_tree(*nodes, edges, super_arm)
                }
                GraphTask::BipartiteMatching { left, right, edges } => {
                    is_maximal_matching(*left, *right, edges, super_arm)
                }
            },
        }
    }
}

/// Kahn topological order; `None` when the graph has a cycle. Nodes are
/// released in index order so the result is deterministic.
pub(crate) fn topological_order(nodes: u32, edges: &[(u32, u32)]) -> Option<Vec<u32>> {
    let n = nodes as usize;
    let mut indegree = vec![0u32; n];
    let mut out: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        indegree[v as usize] += 1;
        out[u as usize].push(v);
    }
    let mut ready: std::collections::BinaryHeap<std::cmp::Reverse<u32>> = (0..nodes)
        .filter(|&v| indegree[v as usize] == 0)
        .map(std::cmp::Reverse)
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(std::cmp::Reverse(u)) = ready.pop() {
        order.push(u);
        for &v in &out[u as usize] {
            indegree[v as usize] -= 1;
            if indegree[v as usize] == 0 {
                ready.push(std::cmp::Reverse(v));
            }
        }
    }
    (order.len() == n).then_some(order)
}

fn longest_path_edges(
    nodes: u32,
    edges: &[(u32, u32)],
    order: &[u32],
    source: u32,
    sink: u32,
) -> u32 {
    let n = nodes as usize;
    let mut out: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &(u, v) in edges {
        out[u as usize].push(v);
    }
    let mut best = vec![i64::MIN; n];
    best[source as usize] = 0;
    for &u in order {
        if best[u as usize] == i64::MIN {
            continue;
        }
        for &v in &out[u as usize] {
            best[v as usize] = best[v as usize].max(best[u as usize] + 1);
        }
    }
    if best[sink as usize] == i64::MIN {
        0
    } else {
        best[sink as usize] as u32
    }
}

pub(crate) fn is_path(edges: &[(u32, u32)], chosen: &[u32], source: u32, sink: u32) -> bool {
    if chosen.iter().any(|&j| j as usize >= edges.len()) {
        return false;
    }
    // Walk from the source consuming exactly one chosen out-edge per node.
    let mut next = std::collections::HashMap::new();
    for &j in chosen {
        if next.insert(edges[j as usize].0, j).is_some() {
            return false;
        }
    }
    let mut at = source;
    let mut used = 0usize;
    while let Some(&j) = next.get(&at) {
        at = edges[j as usize].1;
        used += 1;
        if used > chosen.len() {
            return false;
        }
    }
    at == sink && used == chosen.len()
}

pub(crate) fn is_spanning_tree(nodes: u32, edges: &[(u32, u32)], chosen: &[u32]) -> bool {
    if chosen.len() + 1 != nodes as usize {
        return false;
    }
    if chosen.iter().any(|&j| j as usize >= edges.len()) {
        return false;
    }
    let mut uf = UnionFind::new(nodes);
    for &j in chosen {
        let (u, v) = edges[j as usize];
        if !uf.union(u, v) {
            return false;
        }
    }
    uf.components() == 1
}

pub(crate) fn is_maximal_matching(left: u32, right: u32, edges: &[(u32, u32)], chosen: &[u32]) -> bool {
    if chosen.iter().any(|&j| j as usize >= edges.len()) {
        return false;
    }
    let mut left_used = vec![false; left as usize];
    let mut right_used = vec![false; right as usize];
    for &j in chosen {
        let (u, v) = edges[j as usize];
        if left_used[u as usize] || right_used[v as usize] {
            return false;
        }
        left_used[u as usize] = true;
        right_used[v as usize] = true;
    }
    // Maximal: no graph edge has both endpoints free.
    !edges
        .iter()
        .any(|&(u, v)| !left_used[u as usize] && !right_used[v as usize])
}
