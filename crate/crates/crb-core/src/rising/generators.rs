//! Instance generators: synthetic late-bloomer/early-peaker environments,
//! the adversarial lower-bound pairs, and the non-additive K-max demo.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rising::family::{GraphTask, Sense, SuperArmFamily};
use crate::rising::function::{RisingFunction, Shape};
use crate::rising::instance::{BanditInstance, RewardKind};
use crate::util::KahanSum;

/// Which half of an adversarial instance pair to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PairVariant {
    #[default]
    A,
    B,
}

/// Graph layout for synthetic instances. Arm roles: the listed edges are
/// late bloomers, all others are early peakers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "layout", rename_all = "snake_case", deny_unknown_fields)]
pub enum SyntheticGraph {
    /// Canonical two-path shortest-path graph: a shared three-edge entry
    /// chain followed by two parallel exit edges, one of which is the late
    /// bloomer. Arms: 0-2 = shared early peakers, 3 = early-peaker exit,
    /// 4 = late-bloomer exit; paths {0,1,2,3} and {0,1,2,4}.
    TwoPathDag,
    Dag {
        nodes: u32,
        edges: Vec<(u32, u32)>,
        source: u32,
        sink: u32,
        late_bloomers: Vec<u32>,
    },
    SpanningTree {
        nodes: u32,
        edges: Vec<(u32, u32)>,
        late_bloomers: Vec<u32>,
    },
    Matching {
        left: u32,
        right: u32,
        edges: Vec<(u32, u32)>,
        late_bloomers: Vec<u32>,
    },
    /// K singleton super arms; useful at unit-test scale.
    Singletons { arms: u32, late_bloomers: Vec<u32> },
}

/// Parameters of the synthetic environment. The late bloomer follows
/// `mu(n) = lb_start + A * sum_{m=1..n} m^(-c)` with `A` normalized so that
/// `mu(T) = lb_end`; early peakers are constant at `ep_level`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticParams {
    pub exponent: f64,
    pub horizon: u64,
    pub lb_start: f64,
    pub lb_end: f64,
    pub ep_level: f64,
    pub sigma: f64,
    pub graph: SyntheticGraph,
}

impl Default for SyntheticParams {
    fn default() -> Self {
        SyntheticParams {
            exponent: 1.1,
            horizon: 200_000,
            lb_start: 0.0,
            lb_end: 0.92,
            ep_level: 0.8,
            sigma: 0.01,
            graph: SyntheticGraph::TwoPathDag,
        }
    }
}

fn power_sum(horizon: u64, exponent: f64, index_shift: u32) -> f64 {
    let mut acc = KahanSum::default();
    for m in 1..=horizon {
        acc.add((m as f64 + index_shift as f64).powf(-exponent));
    }
    acc.value()
}

pub fn make_synthetic_instance(params: &SyntheticParams) -> Result<BanditInstance> {
    if params.exponent <= 0.0 {
        return Err(Error::parameter("exponent", "must be positive"));
    }
    if params.horizon < 1 {
        return Err(Error::parameter("horizon", "must be at least 1"));
    }
    if !(0.0..=1.0).contains(&params.lb_start)
        || !(0.0..=1.0).contains(&params.lb_end)
        || params.lb_end <= params.lb_start
    {
        return Err(Error::parameter(
            "lb_start/lb_end",
            "need 0 <= lb_start < lb_end <= 1",
        ));
    }
    if !(0.0..=1.0).contains(&params.ep_level) {
        return Err(Error::parameter("ep_level", "must lie in [0, 1]"));
    }

    let amplitude =
        (params.lb_end - params.lb_start) / power_sum(params.horizon, params.exponent, 0);
    let late_bloomer = || {
        RisingFunction::new(
            Shape::PowerLawSaturating {
                start: params.lb_start,
                amplitude,
                exponent: params.exponent,
                index_shift: 0,
                saturate_after: None,
            },
            params.horizon,
        )
    };
    let early_peaker = || RisingFunction::constant(params.ep_level, params.horizon);

    let (family, arm_count, late): (SuperArmFamily, u32, Vec<u32>) = match &params.graph {
        SyntheticGraph::TwoPathDag => {
            let task = GraphTask::DagShortestPath {
                nodes: 5,
                edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (3, 4)],
                source: 0,
                sink: 4,
            };
            (SuperArmFamily::graph(task, Sense::Minimize)?, 5, vec![4])
        }
        SyntheticGraph::Dag {
            nodes,
            edges,
            source,
            sink,
            late_bloomers,
        } => {
            let task = GraphTask::DagShortestPath {
                nodes: *nodes,
                edges: edges.clone(),
                source: *source,
                sink: *sink,
            };
            (
                SuperArmFamily::graph(task, Sense::Minimize)?,
                edges.len() as u32,
                late_bloomers.clone(),
            )
        }
        SyntheticGraph::SpanningTree {
            nodes,
            edges,
            late_bloomers,
        } => {
            let task = GraphTask::SpanningTree {
                nodes: *nodes,
                edges: edges.clone(),
            };
            (
                SuperArmFamily::graph(task, Sense::Minimize)?,
                edges.len() as u32,
                late_bloomers.clone(),
            )
        }
        SyntheticGraph::Matching {
            left,
            right,
            edges,
            late_bloomers,
        } => {
            let task = GraphTask::BipartiteMatching {
                left: *left,
                right: *right,
                edges: edges.clone(),
            };
            (
                SuperArmFamily::graph(task, Sense::Maximize)?,
                edges.len() as u32,
                late_bloomers.clone(),
            )
        }
        SyntheticGraph::Singletons { arms, late_bloomers } => {
            let family = SuperArmFamily::explicit(
                (0..*arms).map(|i| vec![i]).collect(),
                Sense::Maximize,
            )?;
            (family, *arms, late_bloomers.clone())
        }
    };

    if let Some(&bad) = late.iter().find(|&&i| i >= arm_count) {
        return Err(Error::parameter(
            "late_bloomers",
            format!("arm {bad} out of range (instance has {arm_count} arms)"),
        ));
    }

    let arms = (0..arm_count)
        .map(|i| {
            if late.contains(&i) {
                late_bloomer()
            } else {
                early_peaker()
            }
        })
        .collect::<Result<Vec<_>>>()?;

    BanditInstance::new(
        "synthetic",
        arms,
        params.sigma,
        params.horizon,
        family,
        true,
    )
}

/// Product family over L two-arm slots: slot i picks base arm `i` or `L + i`.
fn replicated_family(replication: u32) -> Result<SuperArmFamily> {
    if replication == 0 {
        return Err(Error::parameter("replication", "must be at least 1"));
    }
    if replication > 16 {
        return Err(Error::parameter(
            "replication",
            "2^L super arms; L > 16 is not enumerable",
        ));
    }
    let l = replication as usize;
    let mut subsets = Vec::with_capacity(1 << l);
    for mask in 0u32..(1 << l) {
        let subset = (0..l)
            .map(|slot| {
                if mask & (1 << slot) == 0 {
                    slot as u32
                } else {
                    replication + slot as u32
                }
            })
            .collect();
        subsets.push(subset);
    }
    SuperArmFamily::explicit(subsets, Sense::Maximize)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LowerBoundPairParams {
    pub horizon: u64,
    pub replication: u32,
    pub variant: PairVariant,
}

impl Default for LowerBoundPairParams {
    fn default() -> Self {
        LowerBoundPairParams {
            horizon: 3000,
            replication: 1,
            variant: PairVariant::A,
        }
    }
}

/// Adversarial pair behind the unconstrained linear lower bound: both
/// instances share a constant 1/2 arm; the second arm ramps with slope
/// 3/(2T) and saturates at 1 (instance A) or at 1/2 (instance B), so the two
/// are indistinguishable until pull T/3.
pub fn make_lower_bound_pair(horizon: u64, replication: u32) -> Result<(BanditInstance, BanditInstance)> {
    if horizon < 3 {
        return Err(Error::parameter("horizon", "must be at least 3"));
    }
    let family = replicated_family(replication)?;
    let slope = 3.0 / (2.0 * horizon as f64);
    let build = |plateau: f64, label: &str| -> Result<BanditInstance> {
        let mut arms = Vec::with_capacity(2 * replication as usize);
        for _ in 0..replication {
            arms.push(RisingFunction::constant(0.5, horizon)?);
        }
        for _ in 0..replication {
            arms.push(RisingFunction::new(
                Shape::PiecewiseLinearSaturating { slope, plateau },
                horizon,
            )?);
        }
        let mut inst = BanditInstance::new(label, arms, 0.0, horizon, family.clone(), true)?;
        if !horizon.is_multiple_of(3) {
            inst = inst.with_note(
                "horizon not divisible by 3: the ramp kinks fall between integer pulls",
            );
        }
        Ok(inst)
    };
    Ok((
        build(1.0, "lower-bound-pair/A")?,
        build(0.5, "lower-bound-pair/B")?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConstrainedPairParams {
    pub horizon: u64,
    pub exponent: f64,
    pub replication: u32,
    pub variant: PairVariant,
}

impl Default for ConstrainedPairParams {
    fn default() -> Self {
        ConstrainedPairParams {
            horizon: 1000,
            exponent: 1.5,
            replication: 1,
            variant: PairVariant::A,
        }
    }
}

/// Constrained adversarial pair: growth arm `mu(m) = sum_{n<=m} (n+1)^(-c)`,
/// constant arm at `mu(P) - eps` with `P = round((2-c)^(1/(c-1)) T)`, and the
/// B variant frozen at `mu(P)`. `eps` balances the two case regret bounds of
/// the argument and must land strictly inside `(0, mu(P))`.
pub fn make_constrained_pair(
    horizon: u64,
    exponent: f64,
    replication: u32,
) -> Result<(BanditInstance, BanditInstance)> {
    if !(1.0 < exponent && exponent < 2.0) {
        return Err(Error::parameter("exponent", "need 1 < c < 2"));
    }
    if horizon < 10 {
        return Err(Error::parameter("horizon", "must be at least 10"));
    }
    let family = replicated_family(replication)?;
    let t = horizon as f64;
    let scale = (2.0 - exponent).powf(1.0 / (exponent - 1.0));
    let p = (scale * t).round() as u64;
    if p < 1 || p >= horizon {
        return Err(Error::Construction(format!(
            "breakpoint P = {p} outside (0, T); c too extreme for this horizon"
        )));
    }

    let growth = RisingFunction::new(
        Shape::PowerLawSaturating {
            start: 0.0,
            amplitude: 1.0,
            exponent,
            index_shift: 1,
            saturate_after: None,
        },
        horizon,
    )?;
    let mu_p = growth.value(p)?;
    let f_t = growth.cumulative(horizon)?;
    let f_t_minus_p = growth.cumulative(horizon - p)?;
    let f_p = growth.cumulative(p)?;

    // Balance residual: case-A bound minus case-B bound, linear and strictly
    // decreasing in eps, so bisection is safe.
    let residual =
        |eps: f64| 2.0 * (mu_p - eps) * p as f64 - f_p - f_t + f_t_minus_p;
    let (mut lo, mut hi) = (0.0_f64, mu_p);
    if residual(lo) <= 0.0 || residual(hi) >= 0.0 {
        return Err(Error::Construction(
            "epsilon balance has no root inside (0, mu(P))".into(),
        ));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let eps = 0.5 * (lo + hi);
    let tol = 1e-12 * (2.0 * p as f64 * mu_p).max(1.0);
    if residual(eps).abs() > tol {
        return Err(Error::Construction(format!(
            "epsilon bisection residual {} exceeds tolerance {tol}",
            residual(eps)
        )));
    }
    if !(0.0 < eps && eps < mu_p) {
        return Err(Error::Construction(format!(
            "epsilon {eps} outside (0, mu(P) = {mu_p})"
        )));
    }

    let constant_level = mu_p - eps;
    let build = |capped: bool, label: &str| -> Result<BanditInstance> {
        let mut arms = Vec::with_capacity(2 * replication as usize);
        for _ in 0..replication {
            arms.push(RisingFunction::constant(constant_level, horizon)?);
        }
        for _ in 0..replication {
            arms.push(RisingFunction::new(
                Shape::PowerLawSaturating {
                    start: 0.0,
                    amplitude: 1.0,
                    exponent,
                    index_shift: 1,
                    saturate_after: capped.then_some(p),
                },
                horizon,
            )?);
        }
        let mut inst = BanditInstance::new(label, arms, 0.0, horizon, family.clone(), true)?
            .with_note(format!(
                "P = round({scale} * {horizon}) = {p}; eps = {eps}"
            ));
        if growth.value(horizon)? > 1.0 || constant_level > 1.0 {
            inst = inst.with_relaxed_value_bound().with_note(
                "construction exceeds the unit outcome range for this exponent; \
                 kept exact rather than clamped",
            );
        }
        Ok(inst)
    };
    Ok((
        build(false, "constrained-pair/A")?,
        build(true, "constrained-pair/B")?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct KmaxParams {
    pub horizon: u64,
}

impl Default for KmaxParams {
    fn default() -> Self {
        KmaxParams { horizon: 10_000 }
    }
}

/// Non-additive demonstration instance: three arms, K-max reward over
/// `{(0,1), (0,2), (1,2)}`. Playing (1,2) once before settling on (0,1)
/// beats every constant policy.
pub fn make_kmax_counterexample(horizon: u64) -> Result<BanditInstance> {
    if horizon < 1000 {
        return Err(Error::parameter("horizon", "must be at least 1000"));
    }
    let ramp = RisingFunction::new(
        Shape::PiecewiseLinearSaturating {
            slope: 10.0 / horizon as f64,
            plateau: 1.0,
        },
        horizon,
    )?;
    let mut step = vec![0.9; horizon as usize];
    step[0] = 0.1;
    let arms = vec![
        ramp,
        RisingFunction::tabulated(step)?,
        RisingFunction::constant(0.5, horizon)?,
    ];
    let family = SuperArmFamily::explicit(
        vec![vec![0, 1], vec![0, 2], vec![1, 2]],
        Sense::Maximize,
    )?;
    Ok(
        BanditInstance::new("kmax-counterexample", arms, 0.0, horizon, family, true)?
            .with_reward(RewardKind::KMax),
    )
}

/// Names and default parameters of every generator, for the CLI catalog and
/// config dispatch.
pub fn generator_catalog() -> Vec<(&'static str, &'static str, serde_json::Value)> {
    vec![
        (
            "synthetic",
            "late bloomer + early peakers on a graph task",
            serde_json::to_value(SyntheticParams::default()).unwrap(),
        ),
        (
            "lower-bound-pair",
            "unconstrained adversarial pair (linear lower bound)",
            serde_json::to_value(LowerBoundPairParams::default()).unwrap(),
        ),
        (
            "constrained-pair",
            "increment-constrained adversarial pair",
            serde_json::to_value(ConstrainedPairParams::default()).unwrap(),
        ),
        (
            "kmax-counterexample",
            "non-additive K-max reward demonstration",
            serde_json::to_value(KmaxParams::default()).unwrap(),
        ),
    ]
}

/// Builds an instance by generator name, as referenced from configs.
pub fn make_by_name(name: &str, params: &serde_json::Value) -> Result<BanditInstance> {
    let bad = |e: serde_json::Error| Error::Config {
        path: format!("instance.params ({name})"),
        reason: e.to_string(),
    };
    match name {
        "synthetic" => {
            let p: SyntheticParams = serde_json::from_value(params.clone()).map_err(bad)?;
            make_synthetic_instance(&p)
        }
        "lower-bound-pair" => {
            let p: LowerBoundPairParams = serde_json::from_value(params.clone()).map_err(bad)?;
            let (a, b) = make_lower_bound_pair(p.horizon, p.replication)?;
            Ok(match p.variant {
                PairVariant::A => a,
                PairVariant::B => b,
            })
        }
        "constrained-pair" => {
            let p: ConstrainedPairParams = serde_json::from_value(params.clone()).map_err(bad)?;
            let (a, b) = make_constrained_pair(p.horizon, p.exponent, p.replication)?;
            Ok(match p.variant {
                PairVariant::A => a,
                PairVariant::B => b,
            })
        }
        "kmax-counterexample" => {
            let p: KmaxParams = serde_json::from_value(params.clone()).map_err(bad)?;
            make_kmax_counterexample(p.horizon)
        }
        other => Err(Error::Config {
            path: "instance.generator".into(),
            reason: format!("unknown generator {other:?}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rising::instance::validate_instance;
    use approx::assert_abs_diff_eq;

    #[test]
    fn synthetic_defaults_hit_the_published_levels() {
        let params = SyntheticParams {
            horizon: 20_000,
            ..SyntheticParams::default()
        };
        let inst = make_synthetic_instance(&params).unwrap();
        // Arm 4 is the late bloomer on the canonical graph.
        assert_abs_diff_eq!(inst.mean(4, 20_000).unwrap(), 0.92, epsilon = 1e-9);
        assert_abs_diff_eq!(inst.mean(0, 7).unwrap(), 0.8);
        // mu(1) = lb_start + A, with A the normalization constant
        // (frozen from an independent 40-digit evaluation).
        assert_abs_diff_eq!(
            inst.mean(4, 1).unwrap(),
            0.133_915_837_958_995_1,
            epsilon = 1e-9
        );
        assert!(validate_instance(&inst).is_valid());
    }

    #[test]
    fn synthetic_rejects_unreachable_target() {
        let params = SyntheticParams {
            lb_start: 0.5,
            lb_end: 0.4,
            ..SyntheticParams::default()
        };
        assert!(make_synthetic_instance(&params).is_err());
    }

    #[test]
    fn lower_bound_pair_matches_the_published_breakpoints() {
        let t = 3000;
        let (a, b) = make_lower_bound_pair(t, 1).unwrap();
        assert_abs_diff_eq!(a.mean(1, 2 * t / 3).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(a.mean(1, t / 3).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.mean(1, t / 3).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b.mean(1, t).unwrap(), 0.5, epsilon = 1e-12);
        assert!(validate_instance(&a).is_valid());
        assert!(validate_instance(&b).is_valid());
    }

    #[test]
    fn replicated_family_is_the_slot_product() {
        let (a, _) = make_lower_bound_pair(300, 2).unwrap();
        // {0,2} x {1,3} as slot choices -> 4 super arms.
        assert!(a.family().contains(&[0, 1]));
        assert!(a.family().contains(&[0, 3]));
        assert!(a.family().contains(&[1, 2]));
        assert!(a.family().contains(&[2, 3]));
        assert!(!a.family().contains(&[0, 2]));
        assert_eq!(a.family().max_size(), 2);
    }

    #[test]
    fn constrained_pair_breakpoint_and_epsilon() {
        let (a, b) = make_constrained_pair(1000, 1.5, 1).unwrap();
        // P = round((2 - 1.5)^(1/0.5) * 1000) = round(0.25 * 1000) = 250.
        assert!(a.notes()[0].contains("= 250;"));
        // mu(1) = 2^{-c}.
        assert_abs_diff_eq!(a.mean(1, 1).unwrap(), 2f64.powf(-1.5), epsilon = 1e-12);
        // eps balances the case bounds; frozen independent value.
        let eps_expected = 0.023_366_742_885_282_45;
        let growth = a.arm(1);
        let mu_p = growth.value(250).unwrap();
        let eps = mu_p - a.mean(0, 1).unwrap();
        assert_abs_diff_eq!(eps, eps_expected, epsilon = 1e-9);
        // B freezes at mu(P).
        assert_abs_diff_eq!(b.mean(1, 900).unwrap(), mu_p, epsilon = 1e-12);
        // Both rising and concave; the unit range is relaxed by construction
        // for this exponent.
        let report = validate_instance(&a);
        assert!(report.is_valid(), "{report:?}");
        assert!(a.value_bound_relaxed());
    }

    #[test]
    fn constrained_pair_increments_stay_in_the_constraint_set() {
        let (a, b) = make_constrained_pair(400, 1.7, 1).unwrap();
        for inst in [&a, &b] {
            let growth = inst.arm(1);
            for n in 1..400 {
                let bound = ((n + 2) as f64).powf(-1.7);
                assert!(
                    growth.increment(n).unwrap() <= bound + 1e-12,
                    "increment at {n} exceeds the constraint"
                );
            }
        }
    }

    #[test]
    fn kmax_instance_spot_values() {
        let inst = make_kmax_counterexample(10_000).unwrap();
        assert_abs_diff_eq!(inst.mean(1, 1).unwrap(), 0.1);
        assert_abs_diff_eq!(inst.mean(1, 2).unwrap(), 0.9);
        assert_abs_diff_eq!(inst.mean(0, 1_000).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inst.mean(2, 777).unwrap(), 0.5);
        assert_eq!(inst.reward_kind(), RewardKind::KMax);
        assert!(make_kmax_counterexample(999).is_err());
        assert!(validate_instance(&inst).is_valid());
    }
}
