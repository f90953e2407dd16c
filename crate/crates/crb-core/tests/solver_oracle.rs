//! Solver-vs-enumeration oracle checks on randomized graph tasks.
//!
//! The structural solvers must attain exactly the objective value found by
//! brute force over the enumerated family, return a feasible member, and
//! resolve ties to the lexicographically smallest sorted index sequence.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

use crb_core::rising::{GraphTask, Sense, SuperArmFamily};
use crb_core::solvers::{enumerate_super_arms, solve, WeightVector};

/// Sum in index order, the canonical value convention shared with the crate.
fn value_of(set: &[u32], per_arm: &[f64]) -> f64 {
    set.iter().map(|&j| per_arm[j as usize]).sum()
}

fn oracle_best(
    family: &SuperArmFamily,
    members: &[Vec<u32>],
    weights: &[f64],
) -> (Vec<u32>, f64) {
    let per_arm: Vec<f64> = match family.sense() {
        Sense::Maximize => weights.iter().map(|&w| w.clamp(0.0, 2.0)).collect(),
        Sense::Minimize => weights.iter().map(|&w| 1.0 - w.clamp(0.0, 1.0)).collect(),
    };
    let better = |a: f64, b: f64| match family.sense() {
        Sense::Maximize => a > b,
        Sense::Minimize => a < b,
    };
    let mut best: Option<(Vec<u32>, f64)> = None;
    for m in members {
        let v = value_of(m, &per_arm);
        match &best {
            None => best = Some((m.clone(), v)),
            Some((bm, bv)) => {
                if better(v, *bv) || (v == *bv && m < bm) {
                    best = Some((m.clone(), v));
                }
            }
        }
    }
    best.expect("nonempty family")
}

/// Weights drawn either continuously or from a coarse grid; the grid makes
/// exact ties common so the tie-break contract actually gets exercised.
fn random_weights(rng: &mut ChaCha12Rng, k: usize) -> Vec<f64> {
    if rng.gen_bool(0.5) {
        (0..k).map(|_| rng.gen_range(0.0..1.0)).collect()
    } else {
        (0..k).map(|_| rng.gen_range(0..5) as f64 * 0.25).collect()
    }
}

fn random_dag(rng: &mut ChaCha12Rng) -> SuperArmFamily {
    loop {
        let nodes: u32 = rng.gen_range(3..=6);
        let mut edges = Vec::new();
        // Forward edges only: node labels are already a topological order.
        for u in 0..nodes {
            for v in (u + 1)..nodes {
                if rng.gen_bool(0.6) {
                    edges.push((u, v));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let task = GraphTask::DagShortestPath {
            nodes,
            edges,
            source: 0,
            sink: nodes - 1,
        };
        let family = SuperArmFamily::graph(task, Sense::Minimize).unwrap();
        if matches!(enumerate_super_arms(&family, 200), Ok(m) if !m.is_empty()) {
            return family;
        }
    }
}

fn random_connected_graph(rng: &mut ChaCha12Rng) -> SuperArmFamily {
    loop {
        let nodes: u32 = rng.gen_range(3..=6);
        let mut edges = Vec::new();
        for u in 0..nodes {
            for v in (u + 1)..nodes {
                if rng.gen_bool(0.55) {
                    edges.push((u, v));
                }
            }
        }
        if edges.len() < nodes as usize - 1 {
            continue;
        }
        let task = GraphTask::SpanningTree { nodes, edges };
        let family = SuperArmFamily::graph(task, Sense::Minimize).unwrap();
        if matches!(enumerate_super_arms(&family, 200), Ok(m) if !m.is_empty()) {
            return family;
        }
    }
}

fn random_bipartite(rng: &mut ChaCha12Rng) -> SuperArmFamily {
    loop {
        let left: u32 = rng.gen_range(1..=4);
        let right: u32 = rng.gen_range(1..=4);
        let mut edges = Vec::new();
        for u in 0..left {
            for v in 0..right {
                if rng.gen_bool(0.6) {
                    edges.push((u, v));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let task = GraphTask::BipartiteMatching { left, right, edges };
        let family = SuperArmFamily::graph(task, Sense::Maximize).unwrap();
        if matches!(enumerate_super_arms(&family, 200), Ok(m) if !m.is_empty()) {
            return family;
        }
    }
}

fn check_family(family: &SuperArmFamily, rng: &mut ChaCha12Rng, cases: usize, label: &str) {
    let members = enumerate_super_arms(family, 200).unwrap();
    for case in 0..cases {
        let weights = random_weights(rng, family.arm_span());
        let got = solve(family, &WeightVector::new(weights.clone()).unwrap()).unwrap();
        assert!(
            family.contains(&got),
            "{label} case {case}: solver returned a non-member {got:?}"
        );
        let (want, want_value) = oracle_best(family, &members, &weights);
        let per_arm: Vec<f64> = match family.sense() {
            Sense::Maximize => weights.iter().map(|&w| w.clamp(0.0, 2.0)).collect(),
            Sense::Minimize => weights.iter().map(|&w| 1.0 - w.clamp(0.0, 1.0)).collect(),
        };
        let got_value = value_of(&got, &per_arm);
        assert_eq!(
            got_value, want_value,
            "{label} case {case}: solver value {got_value} != oracle {want_value} \
             (weights {weights:?}, got {got:?}, want {want:?})"
        );
        assert_eq!(
            got, want,
            "{label} case {case}: tie-break mismatch (weights {weights:?})"
        );
    }
}

#[test]
fn dag_solver_matches_enumeration() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xDA6);
    for _ in 0..60 {
        let family = random_dag(&mut rng);
        check_family(&family, &mut rng, 6, "dag");
    }
}

#[test]
fn tree_solver_matches_enumeration() {
    let mut rng = ChaCha12Rng::seed_from_u64(0x7EE);
    for _ in 0..60 {
        let family = random_connected_graph(&mut rng);
        check_family(&family, &mut rng, 6, "tree");
    }
}

#[test]
fn matching_solver_matches_enumeration() {
    let mut rng = ChaCha12Rng::seed_from_u64(0xA7C);
    for _ in 0..60 {
        let family = random_bipartite(&mut rng);
        check_family(&family, &mut rng, 6, "matching");
    }
}

#[test]
fn solver_is_deterministic() {
    let mut rng = ChaCha12Rng::seed_from_u64(5);
    let family = random_dag(&mut rng);
    let weights = WeightVector::new(random_weights(&mut rng, family.arm_span())).unwrap();
    let a = solve(&family, &weights).unwrap();
    let b = solve(&family, &weights).unwrap();
    assert_eq!(a, b);
}
