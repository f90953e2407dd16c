//! Oracle constant policies, policy-regret curves, the cumulative-increment
//! difficulty measure, brute-force optimality checks, and bound calculators.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rising::{BanditInstance, RewardKind, Sense};
use crate::solvers::enumerate_super_arms;
use crate::util::KahanSum;

/// Default enumeration budget for oracle computations.
pub const DEFAULT_ENUM_CAP: usize = 100_000;

/// Per-step value of playing `set` when member arm `i` sits at mean `mu_i`.
///
/// Maximize-sense families score the outcome sum. Minimize-sense families
/// score `L - cost(set) = L - |set| + sum mu_i`, which keeps rewards in
/// `[0, L]` and cumulative curves nondecreasing; regret is unaffected because
/// the shift is a per-step constant.
pub fn step_value(sense: Sense, max_size: u32, set_len: usize, mu_sum: f64) -> f64 {
    match sense {
        Sense::Maximize => mu_sum,
        Sense::Minimize => (max_size as usize - set_len) as f64 + mu_sum,
    }
}

/// Value of pulling `set` constantly for `t` steps, from the arm prefix sums.
fn horizon_value(inst: &BanditInstance, set: &[u32], t: u64) -> Result<f64> {
    let mut sum = 0.0;
    for &i in set {
        sum += inst.arm(i).cumulative(t)?;
    }
    Ok(match inst.family().sense() {
        Sense::Maximize => sum,
        Sense::Minimize => {
            ((inst.family().max_size() as usize - set.len()) as u64 * t) as f64 + sum
        }
    })
}

/// The best super arm to pull constantly for a horizon of `t` steps, with its
/// cumulative value: `argmax_S sum_{i in S} F_i(t)` for maximize sense, or
/// the equivalent `argmin_S sum_{i in S} (t - F_i(t))` for minimize sense, by
/// enumeration under `cap`.
pub fn oracle_super_arm(inst: &BanditInstance, t: u64, cap: usize) -> Result<(Vec<u32>, f64)> {
    if t < 1 || t > inst.horizon() {
        return Err(Error::OutOfRange {
            what: "oracle horizon",
            index: t,
            min: 1,
            max: inst.horizon(),
        });
    }
    let members = enumerate_super_arms(inst.family(), cap)?;
    let mut best: Option<(Vec<u32>, f64)> = None;
    for m in members {
        let v = horizon_value(inst, &m, t)?;
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((m, v));
        }
    }
    best.ok_or_else(|| Error::Infeasible("family has no members".into()))
}

/// Policy-regret curves against the horizon-t oracle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretCurve {
    /// `oracle_cum[t-1]`: best constant value for a t-step horizon.
    pub oracle_cum: Vec<f64>,
    /// Per-step expected value of the played actions (pseudo-reward).
    pub expected: Vec<f64>,
    /// Cumulative expected value.
    pub policy_cum: Vec<f64>,
    /// `oracle_cum - policy_cum`.
    pub regret: Vec<f64>,
}

impl RegretCurve {
    pub fn final_regret(&self) -> f64 {
        *self.regret.last().expect("nonempty curve")
    }
}

/// Pseudo-regret of a recorded action sequence: expected values `mu_i(N_i)`
/// along the realized pull sequence, against the horizon-t oracle at every t.
/// The horizon-t oracle may switch super arms as t grows, which is exactly
/// what produces decreasing stretches of cumulative regret.
pub fn regret_curve(inst: &BanditInstance, actions: &[Vec<u32>]) -> Result<RegretCurve> {
    let t_max = actions.len() as u64;
    if t_max == 0 || t_max > inst.horizon() {
        return Err(Error::TraceMismatch(format!(
            "trace has {t_max} steps, instance horizon is {}",
            inst.horizon()
        )));
    }
    let k = inst.arm_count();
    let sense = inst.family().sense();
    let max_size = inst.family().max_size();

    let mut pulls = vec![0u64; k];
    let mut expected = Vec::with_capacity(actions.len());
    let mut policy_cum = Vec::with_capacity(actions.len());
    let mut acc = KahanSum::default();
    for (step, set) in actions.iter().enumerate() {
        let mut mu_sum = 0.0;
        for &i in set {
            if i as usize >= k {
                return Err(Error::TraceMismatch(format!(
                    "step {}: arm {i} out of range",
                    step + 1
                )));
            }
            pulls[i as usize] += 1;
            mu_sum += inst.mean(i, pulls[i as usize])?;
        }
        let v = step_value(sense, max_size, set.len(), mu_sum);
        expected.push(v);
        acc.add(v);
        policy_cum.push(acc.value());
    }

    let members = enumerate_super_arms(inst.family(), DEFAULT_ENUM_CAP)?;
    let mut oracle_cum = Vec::with_capacity(actions.len());
    let mut accs: Vec<KahanSum> = vec![KahanSum::default(); members.len()];
    for t in 1..=t_max {
        let mut best = f64::NEG_INFINITY;
        for (set, acc) in members.iter().zip(accs.iter_mut()) {
            for &i in set {
                acc.add(inst.mean(i, t)?);
            }
            let v = match sense {
                Sense::Maximize => acc.value(),
                Sense::Minimize => {
                    ((max_size as usize - set.len()) as u64 * t) as f64 + acc.value()
                }
            };
            best = best.max(v);
        }
        oracle_cum.push(best);
    }

    let regret = oracle_cum
        .iter()
        .zip(&policy_cum)
        .map(|(o, p)| o - p)
        .collect();
    Ok(RegretCurve {
        oracle_cum,
        expected,
        policy_cum,
        regret,
    })
}

/// Cumulative increment of an instance:
/// `Upsilon(M, q) = sum_{l=1..M-1} max_i gamma_i(l)^q`, with `0^0 = 0` so
/// stationary instances register zero difficulty.
pub fn cumulative_increment(inst: &BanditInstance, m: u64, q: f64) -> Result<f64> {
    check_upsilon_args(m, q)?;
    if m > inst.horizon() {
        return Err(Error::OutOfRange {
            what: "cumulative-increment window",
            index: m,
            min: 1,
            max: inst.horizon(),
        });
    }
    let mut acc = KahanSum::default();
    for l in 1..m {
        let mut best = 0.0f64;
        for arm in inst.arms() {
            best = best.max(arm.increment(l)?);
        }
        acc.add(pow_q(best, q));
    }
    Ok(acc.value())
}

/// Instance-free variant over the constraint curve `gamma(l) = (l+1)^(-c)`.
pub fn power_constraint_increment_sum(c: f64, m: u64, q: f64) -> Result<f64> {
    check_upsilon_args(m, q)?;
    let mut acc = KahanSum::default();
    for l in 1..m {
        acc.add(pow_q((l as f64 + 1.0).powf(-c), q));
    }
    Ok(acc.value())
}

fn check_upsilon_args(m: u64, q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::parameter("q", "must lie in [0, 1]"));
    }
    if m < 1 {
        return Err(Error::parameter("M", "must be at least 1"));
    }
    Ok(())
}

fn pow_q(x: f64, q: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(q)
    }
}

/// Deterministic cumulative value of an explicit schedule of super arms,
/// using expected outcomes and honoring the instance's reward kind. This is
/// the evaluator behind the non-additive counterexample accounting.
pub fn evaluate_schedule(inst: &BanditInstance, schedule: &[Vec<u32>]) -> Result<f64> {
    if schedule.len() as u64 > inst.horizon() {
        return Err(Error::TraceMismatch(format!(
            "schedule has {} steps, horizon is {}",
            schedule.len(),
            inst.horizon()
        )));
    }
    let mut pulls = vec![0u64; inst.arm_count()];
    let mut acc = KahanSum::default();
    for set in schedule {
        if !inst.family().contains(set) {
            return Err(Error::InvalidAction {
                action: set.clone(),
                reason: "not a member of the super-arm family".into(),
            });
        }
        let mut mus = Vec::with_capacity(set.len());
        for &i in set {
            pulls[i as usize] += 1;
            mus.push(inst.mean(i, pulls[i as usize])?);
        }
        let v = match inst.reward_kind() {
            RewardKind::Additive => step_value(
                inst.family().sense(),
                inst.family().max_size(),
                set.len(),
                mus.iter().sum(),
            ),
            RewardKind::KMax => crate::rising::kmax_reward(&mus)?,
        };
        acc.add(v);
    }
    Ok(acc.value())
}

/// Result of the exhaustive allocation search behind the constant-policy
/// optimality check.
#[derive(Debug, Clone, Serialize)]
pub struct BruteForceReport {
    /// Best value over all allocations `(T_S)` with `sum T_S = horizon`.
    pub best_value: f64,
    /// One witnessing allocation, index-aligned with `members`.
    pub witness: Vec<u64>,
    pub members: Vec<Vec<u32>>,
    /// Best value attainable by a constant allocation.
    pub best_constant_value: f64,
    /// Does some constant allocation attain the overall best value?
    pub constant_optimal: bool,
}

/// Exhaustive search over all ways to split `horizon` pulls among the super
/// arms. Valid for additive rewards, where permutation invariance makes the
/// allocation rather than the order determine the value.
pub fn brute_force_optimal(inst: &BanditInstance, horizon: u64) -> Result<BruteForceReport> {
    if inst.reward_kind() != RewardKind::Additive {
        return Err(Error::parameter(
            "instance",
            "allocation search requires additive rewards; use evaluate_schedule instead",
        ));
    }
    if !(1..=10).contains(&horizon) || horizon > inst.horizon() {
        return Err(Error::parameter(
            "horizon",
            "allocation search caps at 1 <= T <= 10",
        ));
    }
    let members = enumerate_super_arms(inst.family(), 6)?;
    let sense = inst.family().sense();
    let max_size = inst.family().max_size();

    let value_of = |counts: &[u64]| -> f64 {
        let mut pulls = vec![0u64; inst.arm_count()];
        for (idx, &c) in counts.iter().enumerate() {
            for &i in &members[idx] {
                pulls[i as usize] += c;
            }
        }
        let mut v = 0.0;
        for (i, &n) in pulls.iter().enumerate() {
            v += inst
                .arm(i as u32)
                .cumulative(n)
                .expect("pulls bounded by horizon");
        }
        if sense == Sense::Minimize {
            for (idx, &c) in counts.iter().enumerate() {
                v += ((max_size as usize - members[idx].len()) as u64 * c) as f64;
            }
        }
        v
    };

    let mut best_value = f64::NEG_INFINITY;
    let mut witness = vec![0u64; members.len()];
    let mut counts = vec![0u64; members.len()];
    allocate(
        0,
        horizon,
        &mut counts,
        &mut best_value,
        &mut witness,
        &value_of,
    );

    let mut best_constant_value = f64::NEG_INFINITY;
    for idx in 0..members.len() {
        let mut constant = vec![0u64; members.len()];
        constant[idx] = horizon;
        best_constant_value = best_constant_value.max(value_of(&constant));
    }

    Ok(BruteForceReport {
        best_value,
        witness,
        members,
        best_constant_value,
        constant_optimal: (best_value - best_constant_value).abs()
            <= 1e-9 * best_value.abs().max(1.0),
    })
}

fn allocate(
    idx: usize,
    left: u64,
    counts: &mut Vec<u64>,
    best: &mut f64,
    witness: &mut Vec<u64>,
    value_of: &dyn Fn(&[u64]) -> f64,
) {
    if idx + 1 == counts.len() {
        counts[idx] = left;
        let v = value_of(counts);
        if v > *best {
            *best = v;
            witness.clone_from(counts);
        }
        return;
    }
    for c in 0..=left {
        counts[idx] = c;
        allocate(idx + 1, left - c, counts, best, witness, value_of);
    }
}

/// Inputs to the regret upper-bound calculator.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UpperBoundParams {
    pub horizon: u64,
    pub arms: u32,
    pub max_size: u32,
    pub epsilon: f64,
    pub sigma: f64,
}

/// Where the increment curve comes from: a concrete instance or the
/// constraint shape `gamma(n) = (n+1)^(-c)`.
pub enum IncrementSource<'a> {
    Instance(&'a BanditInstance),
    PowerConstraint { exponent: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QTerms {
    pub q: f64,
    pub term_rising: f64,
    pub term_noise: f64,
    pub total: f64,
}

/// One evaluation of the regret upper bound at a fixed `q`: constant term
/// `(2 + L pi/3) K`, rising term
/// `K T^q (1-2eps)^{-1} Upsilon((1-2eps) L T / K, q)`, and the
/// constant-explicit noise term built from
/// `n' = (2 sigma T)^{2/3} (6 ln 4T)^{1/3} / eps` and the tail integral bound
/// `2 / sqrt(n')`. The noise term is the constant-explicit variant of an
/// asymptotic bound.
pub fn upper_bound_terms(
    params: &UpperBoundParams,
    q: f64,
    source: &IncrementSource<'_>,
) -> Result<QTerms> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::parameter("q", "must lie in [0, 1]"));
    }
    if !(0.0 < params.epsilon && params.epsilon < 0.5) {
        return Err(Error::parameter("epsilon", "must lie in (0, 1/2)"));
    }
    if params.max_size > params.arms || params.arms == 0 || params.max_size == 0 {
        return Err(Error::parameter("max_size", "need 1 <= L <= K"));
    }
    if params.sigma < 0.0 || params.horizon < 1 {
        return Err(Error::parameter("sigma/horizon", "out of range"));
    }
    let t = params.horizon as f64;
    let k = params.arms as f64;
    let l = params.max_size as f64;
    let eps = params.epsilon;

    let window = (((1.0 - 2.0 * eps) * l * t / k).floor() as u64).max(1);
    let upsilon = match source {
        IncrementSource::Instance(inst) => {
            cumulative_increment(inst, window.min(inst.horizon()), q)?
        }
        IncrementSource::PowerConstraint { exponent } => {
            power_constraint_increment_sum(*exponent, window, q)?
        }
    };
    let term_rising = k * t.powf(q) * upsilon / (1.0 - 2.0 * eps);

    let term_noise = if params.sigma == 0.0 {
        0.0
    } else {
        let log4t = (4.0 * t).ln();
        let n_prime =
            (2.0 * params.sigma * t).powf(2.0 / 3.0) * (6.0 * log4t).powf(1.0 / 3.0) / eps;
        k * (n_prime
            + 2.0 * params.sigma * t * (6.0 * log4t / eps.powi(3)).sqrt() * 2.0 / n_prime.sqrt())
    };

    Ok(QTerms {
        q,
        term_rising,
        term_noise,
        total: term_const(params) + term_rising + term_noise,
    })
}

/// `(2 + L pi / 3) K`.
pub fn term_const(params: &UpperBoundParams) -> f64 {
    (2.0 + params.max_size as f64 * std::f64::consts::PI / 3.0) * params.arms as f64
}

/// Worst-case lower bounds: `L T / 32` unconstrained, and for increment
/// exponent `c > 1` the constrained `max(L sqrt(T), L T^(2-c))`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LowerBounds {
    pub unconstrained: f64,
    pub constrained: Option<f64>,
}

pub fn lower_bound_curves(horizon: u64, max_size: u32, c: Option<f64>) -> LowerBounds {
    let t = horizon as f64;
    let l = max_size as f64;
    LowerBounds {
        unconstrained: l * t / 32.0,
        constrained: c
            .filter(|&c| c > 1.0)
            .map(|c| (l * t.sqrt()).max(l * t.powf(2.0 - c))),
    }
}

/// Growth exponents in T of the worst-case bounds as a function of the
/// constraint exponent c: linear on both sides for c <= 1, then
/// `max(1/2, 2-c)` below and `max(2/3, 1/c)` above.
pub fn bound_exponents(c: f64) -> (f64, f64) {
    if c <= 1.0 {
        (1.0, 1.0)
    } else {
        (
            (2.0 - c).clamp(0.5, 1.0),
            (1.0 / c).clamp(2.0 / 3.0, 1.0),
        )
    }
}

/// Full bound report: constant term, q sweep of the upper bound, lower
/// bounds, and exponent summaries.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub params: UpperBoundParams,
    pub exponent_c: Option<f64>,
    pub term_const: f64,
    pub q_grid: Vec<QTerms>,
    pub best: QTerms,
    pub lower: LowerBounds,
    /// `(lower, upper)` growth exponents when c is known.
    pub exponents: Option<(f64, f64)>,
}

/// Sweeps q over a fixed grid (plus `1/c` when in range, where the rising
/// term grows slowest) and reports the minimizing total.
pub fn bound_report(
    params: &UpperBoundParams,
    source: &IncrementSource<'_>,
) -> Result<BoundReport> {
    let exponent_c = match source {
        IncrementSource::PowerConstraint { exponent } => Some(*exponent),
        IncrementSource::Instance(_) => None,
    };
    let mut qs: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    if let Some(c) = exponent_c {
        if c > 1.0 {
            qs.push(1.0 / c);
        }
    }
    qs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    qs.dedup();

    let mut q_grid = Vec::with_capacity(qs.len());
    for q in qs {
        q_grid.push(upper_bound_terms(params, q, source)?);
    }
    let best = *q_grid
        .iter()
        .min_by(|a, b| a.total.partial_cmp(&b.total).unwrap())
        .expect("nonempty grid");
    Ok(BoundReport {
        params: *params,
        exponent_c,
        term_const: term_const(params),
        q_grid,
        best,
        lower: lower_bound_curves(params.horizon, params.max_size, exponent_c),
        exponents: exponent_c.map(bound_exponents),
    })
}

impl BoundReport {
    /// Two-column `parameter,value` CSV for plotting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("parameter,value\n");
        let mut push = |k: &str, v: f64| out.push_str(&format!("{k},{v}\n"));
        push("horizon", self.params.horizon as f64);
        push("arms", self.params.arms as f64);
        push("max_size", self.params.max_size as f64);
        push("epsilon", self.params.epsilon);
        push("sigma", self.params.sigma);
        if let Some(c) = self.exponent_c {
            push("exponent_c", c);
        }
        push("term_const", self.term_const);
        push("best_q", self.best.q);
        push("term_rising", self.best.term_rising);
        push("term_noise", self.best.term_noise);
        push("upper_total", self.best.total);
        push("lower_unconstrained", self.lower.unconstrained);
        if let Some(c) = self.lower.constrained {
            push("lower_constrained", c);
        }
        if let Some((lo, up)) = self.exponents {
            push("lower_exponent", lo);
            push("upper_exponent", up);
        }
        for q in &self.q_grid {
            push(&format!("total_at_q_{:.3}", q.q), q.total);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rising::{make_kmax_counterexample, RisingFunction, Shape, SuperArmFamily};
    use approx::assert_abs_diff_eq;

    /// Two singleton arms: constant 0.5 and the 0.3n ramp.
    fn two_singletons() -> BanditInstance {
        let family =
            SuperArmFamily::explicit(vec![vec![0], vec![1]], Sense::Maximize).unwrap();
        BanditInstance::new(
            "two-singletons",
            vec![
                RisingFunction::constant(0.5, 16).unwrap(),
                RisingFunction::new(
                    Shape::PiecewiseLinearSaturating {
                        slope: 0.3,
                        plateau: 1.0,
                    },
                    16,
                )
                .unwrap(),
            ],
            0.0,
            16,
            family,
            true,
        )
        .unwrap()
    }

    #[test]
    fn oracle_switches_with_the_horizon() {
        let inst = two_singletons();
        // t=1: 0.5 > 0.3; t=4: 2.8 > 2.0.
        let (s1, v1) = oracle_super_arm(&inst, 1, 100).unwrap();
        assert_eq!(s1, vec![0]);
        assert_abs_diff_eq!(v1, 0.5);
        let (s4, v4) = oracle_super_arm(&inst, 4, 100).unwrap();
        assert_eq!(s4, vec![1]);
        assert_abs_diff_eq!(v4, 2.8, epsilon = 1e-12);
    }

    #[test]
    fn minimize_sense_oracle_agrees_with_the_solver_route() {
        // argmin_S sum (t - F_i(t)) can equivalently be computed by the
        // structural solver with weights F_i(t) / t; both routes must agree.
        let inst = crate::rising::make_synthetic_instance(&crate::rising::SyntheticParams {
            horizon: 2000,
            ..Default::default()
        })
        .unwrap();
        for t in [1u64, 50, 400, 655, 656, 1500, 2000] {
            let (via_enum, _) = oracle_super_arm(&inst, t, 100).unwrap();
            let weights: Vec<f64> = (0..inst.arm_count() as u32)
                .map(|i| inst.arm(i).cumulative(t).unwrap() / t as f64)
                .collect();
            let via_solver = crate::solvers::solve(
                inst.family(),
                &crate::solvers::WeightVector::new(weights).unwrap(),
            )
            .unwrap();
            assert_eq!(via_enum, via_solver, "routes disagree at t = {t}");
        }
    }

    #[test]
    fn bound_terms_are_finite_nonnegative_and_monotone_in_t() {
        let source = IncrementSource::PowerConstraint { exponent: 1.3 };
        let mut prev_total = 0.0;
        for t in [100u64, 1_000, 10_000, 100_000] {
            let params = UpperBoundParams {
                horizon: t,
                arms: 3,
                max_size: 2,
                epsilon: 0.2,
                sigma: 0.05,
            };
            let report = bound_report(&params, &source).unwrap();
            for q in &report.q_grid {
                assert!(q.term_rising.is_finite() && q.term_rising >= 0.0);
                assert!(q.term_noise.is_finite() && q.term_noise >= 0.0);
            }
            assert!(report.term_const > 0.0);
            assert!(report.best.total > prev_total, "not monotone at T = {t}");
            prev_total = report.best.total;
        }
    }

    #[test]
    fn step_value_stays_in_zero_to_l() {
        // Minimize sense: L - |S| + sum x over x in [0,1]^|S| lies in [0, L].
        for size in 1..=4usize {
            assert_eq!(step_value(Sense::Minimize, 4, size, 0.0), (4 - size) as f64);
            assert_eq!(
                step_value(Sense::Minimize, 4, size, size as f64),
                4.0
            );
        }
    }

    #[test]
    fn oracle_constant_trace_has_zero_final_regret() {
        let inst = two_singletons();
        let (oracle, _) = oracle_super_arm(&inst, 16, 100).unwrap();
        let actions = vec![oracle; 16];
        let curve = regret_curve(&inst, &actions).unwrap();
        assert_abs_diff_eq!(curve.final_regret(), 0.0, epsilon = 1e-9);
        // The small-horizon oracle differs, so mid-run regret exceeds the
        // final value: the regret-dip shape.
        let max_regret = curve.regret.iter().cloned().fold(f64::MIN, f64::max);
        assert!(max_regret > curve.final_regret());
    }

    #[test]
    fn oracle_cum_is_nondecreasing() {
        let inst = two_singletons();
        let actions = vec![vec![0u32]; 16];
        let curve = regret_curve(&inst, &actions).unwrap();
        assert!(curve.oracle_cum.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn upsilon_zero_for_stationary() {
        let family =
            SuperArmFamily::explicit(vec![vec![0], vec![1]], Sense::Maximize).unwrap();
        let inst = BanditInstance::new(
            "flat",
            vec![
                RisingFunction::constant(0.3, 50).unwrap(),
                RisingFunction::constant(0.9, 50).unwrap(),
            ],
            0.0,
            50,
            family,
            true,
        )
        .unwrap();
        for q in [0.0, 0.5, 1.0] {
            assert_eq!(cumulative_increment(&inst, 50, q).unwrap(), 0.0);
        }
    }

    #[test]
    fn upsilon_matches_hand_sum() {
        // gamma(l) = (l+1)^{-1}, M = 4, q = 1: 1/2 + 1/3 + 1/4 = 13/12.
        assert_abs_diff_eq!(
            power_constraint_increment_sum(1.0, 4, 1.0).unwrap(),
            13.0 / 12.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn upsilon_rejects_bad_q() {
        let inst = two_singletons();
        assert!(cumulative_increment(&inst, 4, 1.5).is_err());
        assert!(cumulative_increment(&inst, 4, -0.1).is_err());
    }

    #[test]
    fn brute_force_prefers_the_riser_at_t4() {
        let inst = two_singletons();
        let report = brute_force_optimal(&inst, 4).unwrap();
        // Enumerate all 5 allocations by hand: constant arm 1 wins with 2.8.
        assert_abs_diff_eq!(report.best_value, 2.8, epsilon = 1e-12);
        assert!(report.constant_optimal);
        assert_eq!(report.witness, vec![0, 4]);
    }

    #[test]
    fn brute_force_single_member_is_trivially_constant() {
        let family = SuperArmFamily::explicit(vec![vec![0]], Sense::Maximize).unwrap();
        let inst = BanditInstance::new(
            "one",
            vec![RisingFunction::constant(0.4, 10).unwrap()],
            0.0,
            10,
            family,
            true,
        )
        .unwrap();
        let report = brute_force_optimal(&inst, 6).unwrap();
        assert!(report.constant_optimal);
        assert_abs_diff_eq!(report.best_value, 2.4, epsilon = 1e-12);
    }

    #[test]
    fn brute_force_rejects_kmax() {
        let inst = make_kmax_counterexample(1000).unwrap();
        assert!(brute_force_optimal(&inst, 4).is_err());
    }

    #[test]
    fn term_const_example() {
        let params = UpperBoundParams {
            horizon: 1000,
            arms: 3,
            max_size: 2,
            epsilon: 0.25,
            sigma: 0.0,
        };
        assert_abs_diff_eq!(
            term_const(&params),
            6.0 + 2.0 * std::f64::consts::PI,
            epsilon = 1e-12
        );
    }

    #[test]
    fn stationary_rising_term_is_zero() {
        let family = SuperArmFamily::explicit(vec![vec![0]], Sense::Maximize).unwrap();
        let inst = BanditInstance::new(
            "flat",
            vec![RisingFunction::constant(0.4, 1000).unwrap()],
            0.0,
            1000,
            family,
            true,
        )
        .unwrap();
        let params = UpperBoundParams {
            horizon: 1000,
            arms: 1,
            max_size: 1,
            epsilon: 0.25,
            sigma: 0.0,
        };
        for q in [0.25, 0.5, 1.0] {
            let terms =
                upper_bound_terms(&params, q, &IncrementSource::Instance(&inst)).unwrap();
            assert_eq!(terms.term_rising, 0.0);
            assert_eq!(terms.term_noise, 0.0);
        }
    }

    #[test]
    fn lower_bound_example() {
        let lb = lower_bound_curves(3200, 1, Some(1.5));
        assert_abs_diff_eq!(lb.unconstrained, 100.0);
        // c = 1.5: max(sqrt(T), T^{0.5}) = sqrt(3200).
        assert_abs_diff_eq!(lb.constrained.unwrap(), 3200f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn exponent_transition() {
        assert_eq!(bound_exponents(0.5), (1.0, 1.0));
        let (lo, up) = bound_exponents(1.2);
        assert_abs_diff_eq!(lo, 0.8);
        assert_abs_diff_eq!(up, 1.0 / 1.2);
        let (lo, up) = bound_exponents(1.5);
        assert_abs_diff_eq!(lo, 0.5);
        assert_abs_diff_eq!(up, 2.0 / 3.0);
        let (lo, up) = bound_exponents(1.8);
        assert_abs_diff_eq!(lo, 0.5);
        assert_abs_diff_eq!(up, 2.0 / 3.0);
    }

    #[test]
    fn bound_report_serializes_to_csv() {
        let params = UpperBoundParams {
            horizon: 3200,
            arms: 2,
            max_size: 1,
            epsilon: 0.25,
            sigma: 0.01,
        };
        let report =
            bound_report(&params, &IncrementSource::PowerConstraint { exponent: 1.5 })
                .unwrap();
        let csv = report.to_csv();
        assert!(csv.starts_with("parameter,value\n"));
        assert!(csv.contains("lower_unconstrained,100\n"));
        assert!(report.best.total <= report.q_grid[0].total);
    }
}
