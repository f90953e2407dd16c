//! Constant policies: a fixed super arm every step, and the oracle variant
//! that fixes the best horizon-T super arm.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::metrics::{oracle_super_arm, DEFAULT_ENUM_CAP};
use crate::policies::Policy;
use crate::rising::{BanditInstance, FeedbackRecord};

pub struct ConstantPolicy {
    label: String,
    super_arm: Vec<u32>,
}

impl ConstantPolicy {
    /// Fixed super arm; must be a member of the instance family.
    pub fn new(inst: &BanditInstance, mut super_arm: Vec<u32>) -> Result<Self> {
        super_arm.sort_unstable();
        if !inst.family().contains(&super_arm) {
            return Err(Error::InvalidAction {
                action: super_arm,
                reason: "constant policy needs a member of the family".into(),
            });
        }
        Ok(ConstantPolicy {
            label: "constant".into(),
            super_arm,
        })
    }

    /// Pulls `S-dagger(mu, T)`: the best constant super arm for the full
    /// horizon, computed from the true means.
    pub fn oracle(inst: &BanditInstance) -> Result<Self> {
        let (super_arm, _) = oracle_super_arm(inst, inst.horizon(), DEFAULT_ENUM_CAP)?;
        Ok(ConstantPolicy {
            label: "oracle-constant".into(),
            super_arm,
        })
    }

    pub fn super_arm(&self) -> &[u32] {
        &self.super_arm
    }
}

impl Policy for ConstantPolicy {
    fn name(&self) -> &str {
        &self.label
    }

    fn select(&mut self, _t: u64, _rng: &mut dyn RngCore) -> Result<Vec<u32>> {
        Ok(self.super_arm.clone())
    }

    fn update(&mut self, _feedback: &FeedbackRecord) {}
}
