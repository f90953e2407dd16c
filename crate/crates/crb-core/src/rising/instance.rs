//! Bandit instances: arms, noise, horizon, family, and validation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rising::family::SuperArmFamily;
use crate::rising::function::RisingFunction;

/// How a super arm's scalar reward is formed from its member outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RewardKind {
    /// Sum of member outcomes (the standard additive setting).
    #[default]
    Additive,
    /// Maximum of member outcomes. Only used by the non-additive
    /// demonstration where the constant policy stops being optimal.
    KMax,
}

/// A combinatorial rising bandit instance. Immutable after construction and
/// safe to share across concurrent runs; all mutable run state (pull counts,
/// RNG) lives outside.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditInstance {
    pub label: String,
    arms: Vec<RisingFunction>,
    sigma: f64,
    horizon: u64,
    family: SuperArmFamily,
    concave_certified: bool,
    #[serde(default)]
    reward: RewardKind,
    /// Set by generators whose construction intentionally exceeds the unit
    /// outcome range (see the constrained adversarial pair for small c).
    #[serde(default)]
    value_bound_relaxed: bool,
    /// Free-form construction notes (breakpoint rounding and the like).
    #[serde(default)]
    notes: Vec<String>,
}

impl BanditInstance {
    pub fn new(
        label: impl Into<String>,
        arms: Vec<RisingFunction>,
        sigma: f64,
        horizon: u64,
        family: SuperArmFamily,
        concave_certified: bool,
    ) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::parameter("arms", "need at least one base arm"));
        }
        if horizon < 1 {
            return Err(Error::parameter("horizon", "must be at least 1"));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::parameter("sigma", "must be finite and nonnegative"));
        }
        if family.arm_span() > arms.len() {
            return Err(Error::parameter(
                "family",
                format!(
                    "family references {} arms but instance has {}",
                    family.arm_span(),
                    arms.len()
                ),
            ));
        }
        if let Some(short) = arms.iter().position(|a| a.horizon() < horizon) {
            return Err(Error::parameter(
                "arms",
                format!("arm {short} covers fewer pulls than the instance horizon"),
            ));
        }
        Ok(BanditInstance {
            label: label.into(),
            arms,
            sigma,
            horizon,
            family,
            concave_certified,
            reward: RewardKind::Additive,
            value_bound_relaxed: false,
            notes: Vec::new(),
        })
    }

    pub fn with_reward(mut self, reward: RewardKind) -> Self {
        self.reward = reward;
        self
    }

    pub(crate) fn with_relaxed_value_bound(mut self) -> Self {
        self.value_bound_relaxed = true;
        self
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn arms(&self) -> &[RisingFunction] {
        &self.arms
    }

    pub fn arm(&self, index: u32) -> &RisingFunction {
        &self.arms[index as usize]
    }

    pub fn arm_count(&self) -> usize {
        self.arms.len()
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn family(&self) -> &SuperArmFamily {
        &self.family
    }

    pub fn concave_certified(&self) -> bool {
        self.concave_certified
    }

    pub fn reward_kind(&self) -> RewardKind {
        self.reward
    }

    pub fn value_bound_relaxed(&self) -> bool {
        self.value_bound_relaxed
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    /// `mu_i(n)` for arm `i` at pull count `n`, restricted to the instance
    /// horizon.
    pub fn mean(&self, arm: u32, n: u64) -> Result<f64> {
        if n > self.horizon {
            return Err(Error::OutOfRange {
                what: "pull count",
                index: n,
                min: 1,
                max: self.horizon,
            });
        }
        self.arms[arm as usize].value(n)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(json: &str) -> Result<Self> {
        let inst: BanditInstance = serde_json::from_str(json)?;
        // Re-run the constructor checks on untrusted input.
        BanditInstance::new(
            inst.label.clone(),
            inst.arms.clone(),
            inst.sigma,
            inst.horizon,
            inst.family.clone(),
            inst.concave_certified,
        )
        .map(|checked| BanditInstance {
            reward: inst.reward,
            value_bound_relaxed: inst.value_bound_relaxed,
            notes: inst.notes.clone(),
            ..checked
        })
    }
}

/// K-max super-arm reward: the maximum member outcome.
pub fn kmax_reward(outcomes: &[f64]) -> Result<f64> {
    if outcomes.is_empty() {
        return Err(Error::parameter("outcomes", "empty super arm"));
    }
    Ok(outcomes.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FindingKind {
    /// `mu(n+1) < mu(n)`.
    NotRising,
    /// `gamma(n+1) > gamma(n)` on a concave-certified instance.
    NotConcave,
    /// `mu(n)` outside `[0, 1]`.
    OutOfUnitRange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmFinding {
    pub arm: u32,
    pub kind: FindingKind,
    /// First pull count exhibiting the violation.
    pub pull: u64,
    pub detail: String,
}

/// Result of [`validate_instance`]: every violated index, grouped by arm.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub arm_findings: Vec<ArmFinding>,
    pub family_findings: Vec<String>,
    /// True when range findings are tolerated by construction.
    pub value_bound_relaxed: bool,
}

impl ValidationReport {
    /// Valid means: rising everywhere, concave where certified, family
    /// invariants hold, and outcomes stay in `[0, 1]` unless the instance
    /// explicitly relaxes the unit bound.
    pub fn is_valid(&self) -> bool {
        self.family_findings.is_empty()
            && self.arm_findings.iter().all(|f| {
                f.kind == FindingKind::OutOfUnitRange && self.value_bound_relaxed
            })
    }
}

const VALIDATION_SLACK: f64 = 1e-12;

/// Checks the rising property for every arm, concavity when the instance is
/// concave-certified, the unit range, and family invariants. Report-based:
/// never errors, lists every violation it finds.
pub fn validate_instance(inst: &BanditInstance) -> ValidationReport {
    let mut arm_findings = Vec::new();
    let horizon = inst.horizon();
    for (i, arm) in inst.arms().iter().enumerate() {
        let mut prev = f64::NAN;
        let mut prev_gamma = f64::NAN;
        for n in 1..=horizon {
            let v = arm.value(n).expect("in-domain pull");
            if !(-VALIDATION_SLACK..=1.0 + VALIDATION_SLACK).contains(&v) {
                arm_findings.push(ArmFinding {
                    arm: i as u32,
                    kind: FindingKind::OutOfUnitRange,
                    pull: n,
                    detail: format!("mu({n}) = {v}"),
                });
            }
            if n > 1 {
                let gamma = v - prev;
                if gamma < -VALIDATION_SLACK {
                    // Flagged at the increment index: gamma(n-1) < 0.
                    arm_findings.push(ArmFinding {
                        arm: i as u32,
                        kind: FindingKind::NotRising,
                        pull: n - 1,
                        detail: format!("mu({}) = {} > mu({}) = {}", n - 1, prev, n, v),
                    });
                }
                if inst.concave_certified() && n > 2 && gamma > prev_gamma + VALIDATION_SLACK {
                    arm_findings.push(ArmFinding {
                        arm: i as u32,
                        kind: FindingKind::NotConcave,
                        pull: n - 1,
                        detail: format!(
                            "gamma({}) = {} > gamma({}) = {}",
                            n - 1,
                            gamma,
                            n - 2,
                            prev_gamma
                        ),
                    });
                }
                prev_gamma = gamma;
            }
            prev = v;
        }
    }

    let mut family_findings = Vec::new();
    if inst.family().arm_span() > inst.arm_count() {
        family_findings.push(format!(
            "family references {} arms, instance has {}",
            inst.family().arm_span(),
            inst.arm_count()
        ));
    }
    if let crate::rising::family::FamilyRepr::Graph { graph } = inst.family().repr() {
        if graph.edge_count() != inst.arm_count() {
            family_findings.push(format!(
                "graph task has {} edges but instance has {} arms (one arm per edge)",
                graph.edge_count(),
                inst.arm_count()
            ));
        }
    }

    ValidationReport {
        arm_findings,
        family_findings,
        value_bound_relaxed: inst.value_bound_relaxed(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rising::family::Sense;

    fn singleton_family(k: u32) -> SuperArmFamily {
        SuperArmFamily::explicit((0..k).map(|i| vec![i]).collect(), Sense::Maximize).unwrap()
    }

    fn tabulated_instance(values: Vec<f64>, concave: bool) -> BanditInstance {
        let horizon = values.len() as u64;
        BanditInstance::new(
            "test",
            vec![RisingFunction::tabulated(values).unwrap()],
            0.0,
            horizon,
            singleton_family(1),
            concave,
        )
        .unwrap()
    }

    #[test]
    fn all_constant_arms_are_valid_and_concave() {
        let inst = BanditInstance::new(
            "const",
            vec![
                RisingFunction::constant(0.2, 5).unwrap(),
                RisingFunction::constant(0.9, 5).unwrap(),
            ],
            0.0,
            5,
            singleton_family(2),
            true,
        )
        .unwrap();
        let report = validate_instance(&inst);
        assert!(report.is_valid(), "{report:?}");
    }

    #[test]
    fn decreasing_table_is_flagged_at_the_right_pull() {
        let inst = tabulated_instance(vec![0.1, 0.3, 0.2], false);
        let report = validate_instance(&inst);
        assert!(!report.is_valid());
        assert_eq!(report.arm_findings.len(), 1);
        assert_eq!(report.arm_findings[0].kind, FindingKind::NotRising);
        assert_eq!(report.arm_findings[0].pull, 2); // gamma(2) < 0
    }

    #[test]
    fn rising_but_convex_fails_only_when_certified() {
        let relaxed = tabulated_instance(vec![0.1, 0.2, 0.4], false);
        assert!(validate_instance(&relaxed).is_valid());

        let certified = tabulated_instance(vec![0.1, 0.2, 0.4], true);
        let report = validate_instance(&certified);
        assert!(!report.is_valid());
        assert_eq!(report.arm_findings[0].kind, FindingKind::NotConcave);
    }

    #[test]
    fn kmax_reward_basics() {
        assert_eq!(kmax_reward(&[0.1, 0.5]).unwrap(), 0.5);
        assert_eq!(kmax_reward(&[0.7]).unwrap(), 0.7);
        assert!(kmax_reward(&[]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let inst = tabulated_instance(vec![0.1, 0.2, 0.3], true);
        let json = inst.to_json().unwrap();
        let back = BanditInstance::from_json(&json).unwrap();
        assert_eq!(inst, back);
    }
}
