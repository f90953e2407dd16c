//! R-ed-UCB baseline: the future-potential estimator applied directly to
//! enumerated super arms instead of base arms.

use std::collections::HashMap;

use rand::RngCore;

use crate::error::Result;
use crate::policies::estimator::{crucb_future_potential, CrucbConfig};
use crate::policies::{argmax_member, ArmHistory, Policy};
use crate::rising::{BanditInstance, FeedbackRecord};
use crate::solvers::enumerate_super_arms;

pub struct RedUcb {
    /// Per-member estimator configs: a super arm of size s sums s
    /// independent outcomes, so its reward stream is sigma * sqrt(s) noisy.
    configs: Vec<CrucbConfig>,
    members: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    histories: Vec<ArmHistory>,
    sense: crate::rising::Sense,
    max_size: u32,
}

impl RedUcb {
    pub fn new(inst: &BanditInstance, cfg: CrucbConfig, enum_cap: usize) -> Result<Self> {
        let members = enumerate_super_arms(inst.family(), enum_cap)?;
        let index = members
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        let configs = members
            .iter()
            .map(|m| CrucbConfig::new(cfg.epsilon, cfg.sigma * (m.len() as f64).sqrt()))
            .collect::<Result<Vec<_>>>()?;
        Ok(RedUcb {
            configs,
            histories: vec![ArmHistory::new(); members.len()],
            members,
            index,
            sense: inst.family().sense(),
            max_size: inst.family().max_size(),
        })
    }
}

impl Policy for RedUcb {
    fn name(&self) -> &str {
        "red-ucb"
    }

    fn select(&mut self, t: u64, _rng: &mut dyn RngCore) -> Result<Vec<u32>> {
        // Unplayed super arms first, in lex order.
        if let Some(idx) = self.histories.iter().position(|h| h.is_empty()) {
            return Ok(self.members[idx].clone());
        }
        let values: Vec<f64> = self
            .histories
            .iter()
            .zip(&self.configs)
            .map(|(h, cfg)| match crucb_future_potential(h, t, cfg) {
                Ok(fp) => fp.mu_acute,
                // One observation is not enough for a slope; keep it dominant.
                Err(_) => f64::INFINITY,
            })
            .collect();
        Ok(self.members[argmax_member(&self.members, &values)].clone())
    }

    fn update(&mut self, feedback: &FeedbackRecord) {
        if let Some(&idx) = self.index.get(&feedback.super_arm) {
            let x_sum: f64 = feedback.outcomes.iter().map(|(_, x, _)| x).sum();
            let reward =
                crate::metrics::step_value(self.sense, self.max_size, feedback.super_arm.len(), x_sum);
            self.histories[idx].push(reward);
        }
    }
}
