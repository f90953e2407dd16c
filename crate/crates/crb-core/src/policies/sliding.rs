//! Sliding-window baselines that treat each super arm as one atomic arm:
//! SW-UCB and SW-TS.

use std::collections::{HashMap, VecDeque};

use rand::RngCore;
use rand_distr::{Beta, Distribution};

use crate::error::Result;
use crate::policies::{argmax_member, Policy};
use crate::rising::{BanditInstance, FeedbackRecord};
use crate::solvers::enumerate_super_arms;

/// Shared bookkeeping: enumerated members, a reward window and a total pull
/// count per member.
struct SuperArmWindows {
    members: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    windows: Vec<VecDeque<f64>>,
    pulls: Vec<u64>,
    window: usize,
    sense: crate::rising::Sense,
    max_size: u32,
}

impl SuperArmWindows {
    fn new(inst: &BanditInstance, window: u64, enum_cap: usize) -> Result<Self> {
        if window < 1 {
            return Err(crate::error::Error::parameter(
                "window",
                "must be at least 1",
            ));
        }
        let members = enumerate_super_arms(inst.family(), enum_cap)?;
        let index = members
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(SuperArmWindows {
            windows: vec![VecDeque::new(); members.len()],
            pulls: vec![0; members.len()],
            members,
            index,
            window: window as usize,
            sense: inst.family().sense(),
            max_size: inst.family().max_size(),
        })
    }

    fn record(&mut self, feedback: &FeedbackRecord, reward: f64) {
        if let Some(&idx) = self.index.get(&feedback.super_arm) {
            let w = &mut self.windows[idx];
            w.push_back(reward);
            while w.len() > self.window {
                w.pop_front();
            }
            self.pulls[idx] += 1;
        }
    }

    fn first_unplayed(&self) -> Option<usize> {
        self.pulls.iter().position(|&n| n == 0)
    }

    fn window_mean(&self, idx: usize) -> f64 {
        let w = &self.windows[idx];
        w.iter().sum::<f64>() / w.len() as f64
    }
}

/// SW-UCB: windowed mean plus `sqrt(3 ln t / (2 N))` per super arm.
pub struct SwUcb {
    state: SuperArmWindows,
}

impl SwUcb {
    pub fn new(inst: &BanditInstance, window: u64, enum_cap: usize) -> Result<Self> {
        Ok(SwUcb {
            state: SuperArmWindows::new(inst, window, enum_cap)?,
        })
    }

    pub fn bonus(t: u64, pulls: u64) -> f64 {
        (3.0 * (t as f64).ln() / (2.0 * pulls as f64)).sqrt()
    }
}

impl Policy for SwUcb {
    fn name(&self) -> &str {
        "sw-ucb"
    }

    fn select(&mut self, t: u64, _rng: &mut dyn RngCore) -> Result<Vec<u32>> {
        if let Some(idx) = self.state.first_unplayed() {
            return Ok(self.state.members[idx].clone());
        }
        let values: Vec<f64> = (0..self.state.members.len())
            .map(|i| self.state.window_mean(i) + Self::bonus(t, self.state.pulls[i]))
            .collect();
        Ok(self.state.members[argmax_member(&self.state.members, &values)].clone())
    }

    fn update(&mut self, feedback: &FeedbackRecord) {
        let reward = super_arm_reward_of(&self.state, feedback);
        self.state.record(feedback, reward);
    }
}

/// SW-TS: Beta posterior over the last `tau` normalized rewards per super
/// arm; rewards are divided by L so the evidence stays in [0, 1].
pub struct SwTs {
    state: SuperArmWindows,
}

impl SwTs {
    pub fn new(inst: &BanditInstance, window: u64, enum_cap: usize) -> Result<Self> {
        Ok(SwTs {
            state: SuperArmWindows::new(inst, window, enum_cap)?,
        })
    }

    /// `(alpha, beta) = (1 + sum x, 1 + sum (1 - x))` over the window.
    pub fn posterior(window: &VecDeque<f64>) -> (f64, f64) {
        let successes: f64 = window.iter().sum();
        let failures: f64 = window.iter().map(|x| 1.0 - x).sum();
        (1.0 + successes, 1.0 + failures)
    }
}

impl Policy for SwTs {
    fn name(&self) -> &str {
        "sw-ts"
    }

    fn select(&mut self, _t: u64, rng: &mut dyn RngCore) -> Result<Vec<u32>> {
        let values: Vec<f64> = self
            .state
            .windows
            .iter()
            .map(|w| {
                let (alpha, beta) = Self::posterior(w);
                Beta::new(alpha, beta)
                    .expect("posterior parameters are >= 1")
                    .sample(&mut *rng)
            })
            .collect();
        Ok(self.state.members[argmax_member(&self.state.members, &values)].clone())
    }

    fn update(&mut self, feedback: &FeedbackRecord) {
        let normalized = (super_arm_reward_of(&self.state, feedback)
            / self.state.max_size as f64)
            .clamp(0.0, 1.0);
        self.state.record(feedback, normalized);
    }
}

fn super_arm_reward_of(state: &SuperArmWindows, feedback: &FeedbackRecord) -> f64 {
    crate::metrics::step_value(
        state.sense,
        state.max_size,
        feedback.super_arm.len(),
        feedback.outcomes.iter().map(|(_, x, _)| x).sum(),
    )
}
