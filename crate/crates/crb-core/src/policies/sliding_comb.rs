//! Combinatorial sliding-window baselines: per-base-arm estimation handed to
//! the task solver. SW-CUCB uses a UCB index, SW-CTS a windowed Beta
//! posterior.

use std::collections::VecDeque;

use rand::RngCore;
use rand_distr::{Beta, Distribution};

use crate::error::{Error, Result};
use crate::policies::Policy;
use crate::rising::{BanditInstance, FeedbackRecord, SuperArmFamily};
use crate::solvers::{solve, WeightVector, DOMINANT_WEIGHT};

struct BaseArmWindows {
    family: SuperArmFamily,
    windows: Vec<VecDeque<f64>>,
    pulls: Vec<u64>,
    window: usize,
}

impl BaseArmWindows {
    fn new(inst: &BanditInstance, window: u64) -> Result<Self> {
        if window < 1 {
            return Err(Error::parameter("window", "must be at least 1"));
        }
        Ok(BaseArmWindows {
            family: inst.family().clone(),
            windows: vec![VecDeque::new(); inst.arm_count()],
            pulls: vec![0; inst.arm_count()],
            window: window as usize,
        })
    }

    fn record(&mut self, feedback: &FeedbackRecord) {
        for &(arm, x, _) in &feedback.outcomes {
            let w = &mut self.windows[arm as usize];
            w.push_back(x);
            while w.len() > self.window {
                w.pop_front();
            }
            self.pulls[arm as usize] += 1;
        }
    }

    fn window_mean(&self, arm: usize) -> f64 {
        let w = &self.windows[arm];
        w.iter().sum::<f64>() / w.len() as f64
    }
}

/// SW-CUCB: per base arm, windowed mean plus `sqrt(3 ln t / (2 N_i))`;
/// never-pulled arms get the dominant exploration weight.
pub struct SwCucb {
    state: BaseArmWindows,
}

impl SwCucb {
    pub fn new(inst: &BanditInstance, window: u64) -> Result<Self> {
        Ok(SwCucb {
            state: BaseArmWindows::new(inst, window)?,
        })
    }
}

impl Policy for SwCucb {
    fn name(&self) -> &str {
        "sw-cucb"
    }

    fn select(&mut self, t: u64, _rng: &mut dyn RngCore) -> Result<Vec<u32>> {
        let weights: Vec<f64> = (0..self.state.windows.len())
            .map(|i| {
                if self.state.pulls[i] == 0 {
                    DOMINANT_WEIGHT
                } else {
                    let bonus =
                        (3.0 * (t as f64).ln() / (2.0 * self.state.pulls[i] as f64)).sqrt();
                    (self.state.window_mean(i) + bonus).clamp(0.0, 2.0)
                }
            })
            .collect();
        solve(&self.state.family, &WeightVector::new(weights)?)
    }

    fn update(&mut self, feedback: &FeedbackRecord) {
        self.state.record(feedback);
    }
}

/// SW-CTS: per base arm, a Beta posterior over the last `tau` truncated
/// outcomes; sampled weights go to the solver. The Beta(1,1) prior already
/// explores, so no forced-exploration weight is needed.
pub struct SwCts {
    state: BaseArmWindows,
}

impl SwCts {
    pub fn new(inst: &BanditInstance, window: u64) -> Result<Self> {
        Ok(SwCts {
            state: BaseArmWindows::new(inst, window)?,
        })
    }
}

impl Policy for SwCts {
    fn name(&self) -> &str {
        "sw-cts"
    }

    fn select(&mut self, _t: u64, rng: &mut dyn RngCore) -> Result<Vec<u32>> {
        let weights: Vec<f64> = self
            .state
            .windows
            .iter()
            .map(|w| {
                let alpha = 1.0 + w.iter().sum::<f64>();
                let beta = 1.0 + w.iter().map(|x| 1.0 - x).sum::<f64>();
                Beta::new(alpha, beta)
                    .expect("posterior parameters are >= 1")
                    .sample(&mut *rng)
            })
            .collect();
        solve(&self.state.family, &WeightVector::new(weights)?)
    }

    fn update(&mut self, feedback: &FeedbackRecord) {
        self.state.record(feedback);
    }
}
