//! Max-weight bipartite matching: augmenting-path assignment for values,
//! with the lex tie-break grown against the constrained solver.

use crate::error::{Error, Result};
use crate::rising::family;
use crate::solvers::{canonical_value, lex_min_optimal};

/// Hungarian algorithm (potentials + column minima) on a square cost matrix;
/// returns for each column the assigned row. O(n^3), fully deterministic.
fn assignment_min_cost(a: &[Vec<f64>]) -> Vec<usize> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![0usize; n + 1]; // p[j]: row (1-based) assigned to column j
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    (1..=n).map(|j| p[j] - 1).collect()
}

/// Max total gain over all matchings containing `forced` and avoiding
/// `excluded`. Gains must be nonnegative; parallel edges collapse to their
/// best representative. `None` only when the forced edges conflict.
fn constrained_best(
    left: u32,
    right: u32,
    edges: &[(u32, u32)],
    gains: &[f64],
    forced: &[u32],
    excluded: &[bool],
) -> Option<f64> {
    let (l, r) = (left as usize, right as usize);
    let mut left_used = vec![false; l];
    let mut right_used = vec![false; r];
    let mut base = 0.0;
    for &j in forced {
        let (u, v) = edges[j as usize];
        if excluded[j as usize] || left_used[u as usize] || right_used[v as usize] {
            return None;
        }
        left_used[u as usize] = true;
        right_used[v as usize] = true;
        base += gains[j as usize];
    }

    let n = l.max(r);
    if n == 0 {
        return Some(base);
    }
    // Cost matrix: minimize the negated gains; free slots cost 0.
    let mut cost = vec![vec![0.0f64; n]; n];
    for (j, &(u, v)) in edges.iter().enumerate() {
        if excluded[j] || left_used[u as usize] || right_used[v as usize] {
            continue;
        }
        let cell = &mut cost[u as usize][v as usize];
        *cell = cell.min(-gains[j]);
    }
    let cols = assignment_min_cost(&cost);
    let rest: f64 = cols
        .iter()
        .enumerate()
        .map(|(j, &i)| -cost[i][j])
        .sum();
    Some(base + rest)
}

/// Max-weight matching under nonnegative gains, returned as a maximal
/// matching: the lex-smallest optimal matching, greedily completed with
/// zero-gain edges in index order.
pub(crate) fn lex_max_weight_maximal_matching(
    left: u32,
    right: u32,
    edges: &[(u32, u32)],
    gains: &[f64],
) -> Result<Vec<u32>> {
    debug_assert!(gains.iter().all(|&g| g >= 0.0));
    let none = vec![false; edges.len()];
    let v_star = constrained_best(left, right, edges, gains, &[], &none)
        .expect("empty forced set cannot conflict");
    let mut chosen = lex_min_optimal(
        edges.len() as u32,
        v_star,
        |forced, excluded| constrained_best(left, right, edges, gains, forced, excluded),
        |prefix| is_matching(left, right, edges, prefix).then(|| canonical_value(prefix, gains)),
    )
    .ok_or_else(|| Error::Infeasible("tie-broken reconstruction failed".into()))?;

    // Maximality completion; by optimality every addable edge has zero gain.
    let mut left_used = vec![false; left as usize];
    let mut right_used = vec![false; right as usize];
    for &j in &chosen {
        let (u, v) = edges[j as usize];
        left_used[u as usize] = true;
        right_used[v as usize] = true;
    }
    for (j, &(u, v)) in edges.iter().enumerate() {
        if !left_used[u as usize] && !right_used[v as usize] {
            left_used[u as usize] = true;
            right_used[v as usize] = true;
            chosen.push(j as u32);
        }
    }
    chosen.sort_unstable();
    debug_assert!(family::is_maximal_matching(left, right, edges, &chosen));
    Ok(chosen)
}

fn is_matching(left: u32, right: u32, edges: &[(u32, u32)], chosen: &[u32]) -> bool {
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
    true
}
