//! Semi-bandit environment: one step draws an outcome for every member of
//! the chosen super arm and advances that arm's pull count.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rising::instance::BanditInstance;

/// Semi-bandit feedback for one step: outcome and post-increment pull count
/// for exactly the arms of the chosen super arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeedbackRecord {
    pub time: u64,
    pub super_arm: Vec<u32>,
    /// `(arm, outcome, pull count after the increment)`, in arm order.
    pub outcomes: Vec<(u32, f64, u64)>,
}

/// Per-run mutable environment state: the pull-count vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvState {
    pub pulls: Vec<u64>,
}

impl EnvState {
    pub fn new(arms: usize) -> Self {
        EnvState {
            pulls: vec![0; arms],
        }
    }
}

/// Plays `super_arm` at time `t`: for each member arm, draws
/// `Normal(mu_i(N_i + 1), sigma^2)` truncated to `[0, 1]` and increments the
/// pull count. Deterministic given the RNG state and call sequence.
pub fn env_step<R: Rng>(
    inst: &BanditInstance,
    state: &mut EnvState,
    super_arm: &[u32],
    t: u64,
    rng: &mut R,
) -> Result<FeedbackRecord> {
    if t < 1 || t > inst.horizon() {
        return Err(Error::OutOfRange {
            what: "time step",
            index: t,
            min: 1,
            max: inst.horizon(),
        });
    }
    if state.pulls.len() != inst.arm_count() {
        return Err(Error::TraceMismatch(format!(
            "state tracks {} arms, instance has {}",
            state.pulls.len(),
            inst.arm_count()
        )));
    }
    if !inst.family().contains(super_arm) {
        return Err(Error::InvalidAction {
            action: super_arm.to_vec(),
            reason: "not a member of the super-arm family".into(),
        });
    }

    let sigma = inst.sigma();
    let mut outcomes = Vec::with_capacity(super_arm.len());
    for &arm in super_arm {
        let n = state.pulls[arm as usize] + 1;
        let mean = inst.mean(arm, n)?;
        let x = if sigma == 0.0 {
            mean
        } else {
            let normal = Normal::new(mean, sigma).expect("finite mean and positive sigma");
            normal.sample(rng).clamp(0.0, 1.0)
        };
        state.pulls[arm as usize] = n;
        outcomes.push((arm, x, n));
    }
    Ok(FeedbackRecord {
        time: t,
        super_arm: super_arm.to_vec(),
        outcomes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rising::family::{Sense, SuperArmFamily};
    use crate::rising::function::{RisingFunction, Shape};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn two_arm_instance(sigma: f64) -> BanditInstance {
        let family = SuperArmFamily::explicit(vec![vec![0], vec![1]], Sense::Maximize).unwrap();
        BanditInstance::new(
            "env-test",
            vec![
                RisingFunction::new(
                    Shape::PiecewiseLinearSaturating {
                        slope: 0.3,
                        plateau: 1.0,
                    },
                    100,
                )
                .unwrap(),
                RisingFunction::constant(0.5, 100).unwrap(),
            ],
            sigma,
            100,
            family,
            true,
        )
        .unwrap()
    }

    #[test]
    fn zero_noise_returns_the_mean_exactly() {
        let inst = two_arm_instance(0.0);
        let mut state = EnvState::new(2);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        // Fourth pull of arm 0: mu(4) = min(1.2, 1.0) = 1.0.
        for t in 1..=3 {
            env_step(&inst, &mut state, &[0], t, &mut rng).unwrap();
        }
        let fb = env_step(&inst, &mut state, &[0], 4, &mut rng).unwrap();
        assert_eq!(fb.outcomes, vec![(0, 1.0, 4)]);
    }

    #[test]
    fn pull_counts_move_only_for_chosen_arms() {
        let inst = two_arm_instance(0.1);
        let mut state = EnvState::new(2);
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        env_step(&inst, &mut state, &[1], 1, &mut rng).unwrap();
        assert_eq!(state.pulls, vec![0, 1]);
    }

    #[test]
    fn invalid_action_is_rejected() {
        let inst = two_arm_instance(0.0);
        let mut state = EnvState::new(2);
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let err = env_step(&inst, &mut state, &[0, 1], 1, &mut rng);
        assert!(matches!(err, Err(Error::InvalidAction { .. })));
        assert_eq!(state.pulls, vec![0, 0]);
    }

    #[test]
    fn same_seed_same_outcomes() {
        let inst = two_arm_instance(0.05);
        let run = |seed: u64| {
            let mut state = EnvState::new(2);
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            (1..=20)
                .map(|t| {
                    env_step(&inst, &mut state, &[(t % 2) as u32], t, &mut rng)
                        .unwrap()
                        .outcomes[0]
                        .1
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(42), run(42));
        assert_ne!(run(42), run(43));
    }

    #[test]
    fn outcomes_are_truncated_to_unit_range() {
        let inst = two_arm_instance(5.0);
        let mut state = EnvState::new(2);
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for t in 1..=50 {
            let fb = env_step(&inst, &mut state, &[1], t, &mut rng).unwrap();
            let x = fb.outcomes[0].1;
            assert!((0.0..=1.0).contains(&x));
        }
    }
}
