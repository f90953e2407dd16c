//! CRUCB: estimate every base arm's future potential, then let the
//! task-specific solver pick the super arm that maximizes it.

use rand::RngCore;

use crate::error::Result;
use crate::policies::estimator::{crucb_future_potential, CrucbConfig};
use crate::policies::{ArmHistory, Policy};
use crate::rising::{BanditInstance, FeedbackRecord, SuperArmFamily};
use crate::solvers::{solve, WeightVector, DOMINANT_WEIGHT};

pub struct Crucb {
    cfg: CrucbConfig,
    family: SuperArmFamily,
    histories: Vec<ArmHistory>,
}

impl Crucb {
    pub fn new(inst: &BanditInstance, cfg: CrucbConfig) -> Self {
        Crucb {
            cfg,
            family: inst.family().clone(),
            histories: vec![ArmHistory::new(); inst.arm_count()],
        }
    }

    /// Solver weights at time t: dominant for arms with fewer than two
    /// pulls, otherwise the future potential clamped to [0, 2].
    pub fn weights(&self, t: u64) -> Vec<f64> {
        self.histories
            .iter()
            .map(|hist| match crucb_future_potential(hist, t, &self.cfg) {
                Ok(fp) => fp.mu_acute.clamp(0.0, 2.0),
                Err(_) => DOMINANT_WEIGHT,
            })
            .collect()
    }

    pub fn history(&self, arm: u32) -> &ArmHistory {
        &self.histories[arm as usize]
    }
}

impl Policy for Crucb {
    fn name(&self) -> &str {
        "crucb"
    }

    fn select(&mut self, t: u64, _rng: &mut dyn RngCore) -> Result<Vec<u32>> {
        solve(&self.family, &WeightVector::new(self.weights(t))?)
    }

    fn update(&mut self, feedback: &FeedbackRecord) {
        for &(arm, x, _) in &feedback.outcomes {
            self.histories[arm as usize].push(x);
        }
    }
}
