//! Full enumeration of super-arm families, used as the test oracle for the
//! structural solvers and by baselines that treat super arms atomically.

use crate::error::{Error, Result};
use crate::rising::{FamilyRepr, GraphTask, SuperArmFamily};
use crate::util::UnionFind;

/// Enumerates every member of the family in lexicographic order: all
/// source-to-sink paths, all spanning trees, all maximal matchings, or the
/// explicit list. Errors once more than `cap` members are found.
pub fn enumerate_super_arms(family: &SuperArmFamily, cap: usize) -> Result<Vec<Vec<u32>>> {
    if cap < 1 {
        return Err(Error::parameter("cap", "must be at least 1"));
    }
    let mut out: Vec<Vec<u32>> = Vec::new();
    match family.repr() {
        FamilyRepr::Explicit { subsets } => {
            if subsets.len() > cap {
                return Err(Error::EnumerationOverflow {
                    cap,
                    found: subsets.len(),
                });
            }
            out = subsets.clone();
        }
        FamilyRepr::Graph { graph } => match graph {
            GraphTask::DagShortestPath {
                nodes,
                edges,
                source,
                sink,
            } => {
                let mut adj: Vec<Vec<u32>> = vec![Vec::new(); *nodes as usize];
                for (j, &(u, _)) in edges.iter().enumerate() {
                    adj[u as usize].push(j as u32);
                }
                let mut stack = Vec::new();
                path_dfs(edges, &adj, *source, *sink, &mut stack, &mut out, cap)?;
            }
            GraphTask::SpanningTree { nodes, edges } => {
                let uf = UnionFind::new(*nodes);
                let mut chosen = Vec::new();
                tree_rec(*nodes, edges, 0, &uf, &mut chosen, &mut out, cap)?;
            }
            GraphTask::BipartiteMatching { left, right, edges } => {
                let mut chosen = Vec::new();
                let mut left_used = vec![false; *left as usize];
                let mut right_used = vec![false; *right as usize];
                matching_rec(
                    edges,
                    0,
                    &mut chosen,
                    &mut left_used,
                    &mut right_used,
                    &mut out,
                    cap,
                )?;
            }
        },
    }
    out.sort();
    Ok(out)
}

fn emit(set: Vec<u32>, out: &mut Vec<Vec<u32>>, cap: usize) -> Result<()> {
    if out.len() == cap {
        return Err(Error::EnumerationOverflow {
            cap,
            found: cap + 1,
        });
    }
    out.push(set);
    Ok(())
}

fn path_dfs(
    edges: &[(u32, u32)],
    adj: &[Vec<u32>],
    at: u32,
    sink: u32,
    stack: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
    cap: usize,
) -> Result<()> {
    if at == sink && !stack.is_empty() {
        let mut set = stack.clone();
        set.sort_unstable();
        return emit(set, out, cap);
    }
    for &j in &adj[at as usize] {
        stack.push(j);
        path_dfs(edges, adj, edges[j as usize].1, sink, stack, out, cap)?;
        stack.pop();
    }
    Ok(())
}

fn tree_rec(
    nodes: u32,
    edges: &[(u32, u32)],
    idx: usize,
    uf: &UnionFind,
    chosen: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
    cap: usize,
) -> Result<()> {
    if chosen.len() + 1 == nodes as usize {
        return emit(chosen.clone(), out, cap);
    }
    let needed = nodes as usize - 1 - chosen.len();
    if edges.len() - idx < needed {
        return Ok(());
    }
    let (u, v) = edges[idx];
    let mut with = uf.clone();
    if with.union(u, v) {
        chosen.push(idx as u32);
        tree_rec(nodes, edges, idx + 1, &with, chosen, out, cap)?;
        chosen.pop();
    }
    tree_rec(nodes, edges, idx + 1, uf, chosen, out, cap)
}

fn matching_rec(
    edges: &[(u32, u32)],
    idx: usize,
    chosen: &mut Vec<u32>,
    left_used: &mut [bool],
    right_used: &mut [bool],
    out: &mut Vec<Vec<u32>>,
    cap: usize,
) -> Result<()> {
    if idx == edges.len() {
        // Maximal means no graph edge has both endpoints free.
        let maximal = !edges
            .iter()
            .any(|&(u, v)| !left_used[u as usize] && !right_used[v as usize]);
        if maximal {
            return emit(chosen.clone(), out, cap);
        }
        return Ok(());
    }
    let (u, v) = edges[idx];
    if !left_used[u as usize] && !right_used[v as usize] {
        left_used[u as usize] = true;
        right_used[v as usize] = true;
        chosen.push(idx as u32);
        matching_rec(edges, idx + 1, chosen, left_used, right_used, out, cap)?;
        chosen.pop();
        left_used[u as usize] = false;
        right_used[v as usize] = false;
    }
    matching_rec(edges, idx + 1, chosen, left_used, right_used, out, cap)
}
