//! Bandit policies behind one interface: build from a spec, `select` a super
//! arm each step, `update` on semi-bandit feedback.

mod constant;
mod crucb;
mod estimator;
mod red_ucb;
mod sliding;
mod sliding_comb;

pub use constant::ConstantPolicy;
pub use crucb::Crucb;
pub use estimator::{crucb_future_potential, CrucbConfig, FuturePotential};
pub use red_ucb::RedUcb;
pub use sliding::{SwTs, SwUcb};
pub use sliding_comb::{SwCts, SwCucb};

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rising::{BanditInstance, FeedbackRecord};

/// A policy is a pure state machine over feedback records: replaying the
/// same records (and RNG stream, for sampling policies) reproduces the same
/// action sequence.
pub trait Policy: Send {
    fn name(&self) -> &str;
    fn select(&mut self, t: u64, rng: &mut dyn RngCore) -> Result<Vec<u32>>;
    fn update(&mut self, feedback: &FeedbackRecord);
}

/// Append-only outcome history of one (base or super) arm, with prefix sums
/// so the windowed estimators stay O(1) per call. Pull indexing is 1-based:
/// `outcome(l)` is the l-th observation.
#[derive(Debug, Clone, Default)]
pub struct ArmHistory {
    outcomes: Vec<f64>,
    prefix_x: Vec<f64>,
    prefix_lx: Vec<f64>,
}

impl ArmHistory {
    pub fn new() -> Self {
        ArmHistory {
            outcomes: Vec::new(),
            prefix_x: vec![0.0],
            prefix_lx: vec![0.0],
        }
    }

    pub fn push(&mut self, x: f64) {
        self.outcomes.push(x);
        let l = self.outcomes.len() as f64;
        self.prefix_x.push(self.prefix_x.last().unwrap() + x);
        self.prefix_lx.push(self.prefix_lx.last().unwrap() + l * x);
    }

    pub fn len(&self) -> u64 {
        self.outcomes.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    pub fn outcome(&self, l: u64) -> f64 {
        self.outcomes[(l - 1) as usize]
    }

    /// `sum_{l=a..=b} X(l)`; 1-based inclusive bounds.
    pub(crate) fn sum(&self, a: u64, b: u64) -> f64 {
        self.prefix_x[b as usize] - self.prefix_x[(a - 1) as usize]
    }

    /// `sum_{l=a..=b} l * X(l)`.
    pub(crate) fn weighted_sum(&self, a: u64, b: u64) -> f64 {
        self.prefix_lx[b as usize] - self.prefix_lx[(a - 1) as usize]
    }
}

/// Argmax over per-member values with the lex tie-break: the first member
/// (members are kept in lex order) attaining the maximum wins.
pub(crate) fn argmax_member(members: &[Vec<u32>], values: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..members.len() {
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}

/// Policy selection by name, with hyperparameters as a JSON sub-object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySpec {
    pub name: String,
    #[serde(default = "default_params")]
    pub params: serde_json::Value,
    /// Output label; defaults to the policy name.
    #[serde(default)]
    pub label: Option<String>,
}

fn default_params() -> serde_json::Value {
    serde_json::json!({})
}

impl PolicySpec {
    pub fn named(name: &str) -> Self {
        PolicySpec {
            name: name.into(),
            params: default_params(),
            label: None,
        }
    }

    pub fn label(&self) -> &str {
        self.label.as_deref().unwrap_or(&self.name)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct CrucbParams {
    epsilon: f64,
}

impl Default for CrucbParams {
    fn default() -> Self {
        CrucbParams { epsilon: 0.25 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct RedUcbParams {
    epsilon: f64,
    enum_cap: usize,
}

impl Default for RedUcbParams {
    fn default() -> Self {
        RedUcbParams {
            epsilon: 0.25,
            enum_cap: 10_000,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
struct WindowParams {
    window: u64,
    enum_cap: usize,
}

impl Default for WindowParams {
    fn default() -> Self {
        WindowParams {
            window: 100,
            enum_cap: 10_000,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    super_arm: Vec<u32>,
}

fn parse<T: serde::de::DeserializeOwned>(name: &str, params: &serde_json::Value) -> Result<T> {
    serde_json::from_value(params.clone()).map_err(|e| Error::Config {
        path: format!("policy {name} params"),
        reason: e.to_string(),
    })
}

/// Instantiates a policy for an instance. The noise scale sigma is taken
/// from the instance (the setting assumes it known).
pub fn build_policy(spec: &PolicySpec, inst: &BanditInstance) -> Result<Box<dyn Policy>> {
    match spec.name.as_str() {
        "crucb" => {
            let p: CrucbParams = parse(&spec.name, &spec.params)?;
            Ok(Box::new(Crucb::new(
                inst,
                CrucbConfig::new(p.epsilon, inst.sigma())?,
            )))
        }
        "red-ucb" => {
            let p: RedUcbParams = parse(&spec.name, &spec.params)?;
            Ok(Box::new(RedUcb::new(
                inst,
                CrucbConfig::new(p.epsilon, inst.sigma())?,
                p.enum_cap,
            )?))
        }
        "sw-ucb" => {
            let p: WindowParams = parse(&spec.name, &spec.params)?;
            Ok(Box::new(SwUcb::new(inst, p.window, p.enum_cap)?))
        }
        "sw-ts" => {
            let p: WindowParams = parse(&spec.name, &spec.params)?;
            Ok(Box::new(SwTs::new(inst, p.window, p.enum_cap)?))
        }
        "sw-cucb" => {
            let p: WindowParams = parse(&spec.name, &spec.params)?;
            Ok(Box::new(SwCucb::new(inst, p.window)?))
        }
        "sw-cts" => {
            let p: WindowParams = parse(&spec.name, &spec.params)?;
            Ok(Box::new(SwCts::new(inst, p.window)?))
        }
        "constant" => {
            let p: ConstantParams = parse(&spec.name, &spec.params)?;
            Ok(Box::new(ConstantPolicy::new(inst, p.super_arm)?))
        }
        "oracle-constant" => Ok(Box::new(ConstantPolicy::oracle(inst)?)),
        other => Err(Error::Config {
            path: "policy.name".into(),
            reason: format!(
                "unknown policy {other:?}; expected one of crucb, red-ucb, sw-ucb, \
                 sw-ts, sw-cucb, sw-cts, constant, oracle-constant"
            ),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn history_prefix_sums() {
        let mut h = ArmHistory::new();
        for x in [0.1, 0.2, 0.3, 0.4] {
            h.push(x);
        }
        assert_eq!(h.len(), 4);
        assert!((h.sum(2, 4) - 0.9).abs() < 1e-12);
        // 2*0.2 + 3*0.3 = 1.3
        assert!((h.weighted_sum(2, 3) - 1.3).abs() < 1e-12);
        assert_eq!(h.outcome(3), 0.3);
    }

    #[test]
    fn unknown_policy_name_is_a_config_error() {
        let inst = crate::rising::make_kmax_counterexample(1000).unwrap();
        let err = build_policy(&PolicySpec::named("ucb1"), &inst);
        assert!(matches!(err, Err(Error::Config { .. })));
    }
}
