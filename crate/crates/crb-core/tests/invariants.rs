//! Property tests for the core invariants: environment bookkeeping, order
//! invariance of additive rewards, estimator optimism under concavity,
//! difficulty-measure monotonicity, and weight-shift invariance of the
//! solver on fixed-size families.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crb_core::metrics::{cumulative_increment, evaluate_schedule, power_constraint_increment_sum};
use crb_core::policies::{crucb_future_potential, ArmHistory, CrucbConfig};
use crb_core::rising::{
    env_step, validate_instance, BanditInstance, EnvState, RisingFunction, Sense,
    SuperArmFamily,
};
use crb_core::solvers::{solve, WeightVector};

/// Strictly increasing concave table: increments drawn decreasing.
fn concave_table(len: usize, seed: u64) -> Vec<f64> {
    use rand::Rng;
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let start: f64 = rng.gen_range(0.0..0.3);
    let mut increments: Vec<f64> = (0..len - 1)
        .map(|_| rng.gen_range(0.0..1.0_f64))
        .collect();
    increments.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let total: f64 = increments.iter().sum();
    let headroom = rng.gen_range(0.5..1.0) * (1.0 - start);
    let scale = if total > 0.0 { headroom / total } else { 0.0 };
    let mut values = vec![start];
    for inc in increments {
        values.push(values.last().unwrap() + inc * scale);
    }
    values
}

fn singleton_instance(tables: Vec<Vec<f64>>, sigma: f64) -> BanditInstance {
    let horizon = tables[0].len() as u64;
    let k = tables.len() as u32;
    let arms = tables
        .into_iter()
        .map(|t| RisingFunction::tabulated(t).unwrap())
        .collect();
    let family =
        SuperArmFamily::explicit((0..k).map(|i| vec![i]).collect(), Sense::Maximize).unwrap();
    BanditInstance::new("prop", arms, sigma, horizon, family, true).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Generated concave tables always validate.
    #[test]
    fn concave_tables_validate(seed in any::<u64>(), len in 3usize..40) {
        let inst = singleton_instance(
            vec![concave_table(len, seed), concave_table(len, seed ^ 0xABCD)],
            0.0,
        );
        let report = validate_instance(&inst);
        prop_assert!(report.is_valid(), "{report:?}");
    }

    /// Semi-bandit contract: exactly the chosen arms advance, by one.
    #[test]
    fn env_step_moves_only_chosen_arms(seed in any::<u64>(), len in 3usize..20) {
        let inst = singleton_instance(
            vec![concave_table(len, seed), concave_table(len, seed ^ 1)],
            0.05,
        );
        let mut env = EnvState::new(2);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        for t in 1..=(len as u64) {
            let arm = (t % 2) as u32;
            let before = env.pulls.clone();
            let fb = env_step(&inst, &mut env, &[arm], t, &mut rng).unwrap();
            prop_assert_eq!(fb.outcomes.len(), 1);
            prop_assert_eq!(env.pulls[arm as usize], before[arm as usize] + 1);
            prop_assert_eq!(env.pulls[1 - arm as usize], before[1 - arm as usize]);
        }
    }

    /// With sigma = 0 and additive rewards, any permutation of a fixed
    /// multiset of super-arm pulls yields the same total reward.
    #[test]
    fn order_invariance_under_zero_noise(seed in any::<u64>(), len in 4usize..24) {
        use rand::seq::SliceRandom;
        let inst = singleton_instance(
            vec![concave_table(len, seed), concave_table(len, seed ^ 2)],
            0.0,
        );
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let mut schedule: Vec<Vec<u32>> = (0..len)
            .map(|i| vec![(i % 2) as u32])
            .collect();
        let v1 = evaluate_schedule(&inst, &schedule).unwrap();
        schedule.shuffle(&mut rng);
        let v2 = evaluate_schedule(&inst, &schedule).unwrap();
        prop_assert!((v1 - v2).abs() < 1e-9, "{v1} vs {v2}");
    }

    /// Deterministic optimism: on concave histories the extrapolated mean at
    /// time t >= N is never below the true mean mu(t).
    #[test]
    fn estimator_is_optimistic_on_concave_histories(
        seed in any::<u64>(),
        len in 6usize..60,
        eps in 0.05f64..0.49,
    ) {
        let table = concave_table(len, seed);
        let mut hist = ArmHistory::new();
        let cfg = CrucbConfig::new(eps, 0.0).unwrap();
        for (n, &x) in table.iter().enumerate() {
            hist.push(x);
            let pulls = n as u64 + 1;
            if pulls < 2 {
                continue;
            }
            for t in pulls..=(len as u64) {
                let fp = crucb_future_potential(&hist, t, &cfg).unwrap();
                let truth = table[(t - 1) as usize];
                prop_assert!(
                    fp.mu_hat >= truth - 1e-9,
                    "pulls={pulls} t={t}: mu_hat {} < mu(t) {truth}",
                    fp.mu_hat
                );
                prop_assert!(fp.beta >= 0.0);
                prop_assert!(fp.mu_acute >= fp.mu_hat);
                prop_assert!(fp.window >= 1);
                prop_assert!(fp.window <= ((eps * pulls as f64).floor() as u64).max(1));
            }
        }
    }

    /// Upsilon is nondecreasing in M and nonincreasing in q for increments
    /// bounded by 1.
    #[test]
    fn upsilon_monotonicity(seed in any::<u64>(), len in 4usize..40) {
        let inst = singleton_instance(
            vec![concave_table(len, seed), concave_table(len, seed ^ 3)],
            0.0,
        );
        let t = len as u64;
        let mut prev = 0.0;
        for m in 1..=t {
            let v = cumulative_increment(&inst, m, 0.7).unwrap();
            prop_assert!(v >= prev - 1e-12);
            prev = v;
        }
        let mut prev_q = f64::INFINITY;
        for i in 0..=10 {
            let q = i as f64 / 10.0;
            let v = cumulative_increment(&inst, t, q).unwrap();
            prop_assert!(v <= prev_q + 1e-12, "q={q}: {v} > {prev_q}");
            prev_q = v;
        }
    }

    /// The instance-level Upsilon agrees with the curve-level sum when the
    /// instance's increments are exactly the constraint curve: with zero
    /// index shift, `gamma(l) = mu(l+1) - mu(l) = (l+1)^(-c)`.
    #[test]
    fn upsilon_instance_matches_curve(m in 2u64..200) {
        let arm = RisingFunction::new(
            crb_core::rising::Shape::PowerLawSaturating {
                start: 0.0,
                amplitude: 1.0,
                exponent: 2.5,
                index_shift: 0,
                saturate_after: None,
            },
            200,
        )
        .unwrap();
        let family = SuperArmFamily::explicit(vec![vec![0]], Sense::Maximize).unwrap();
        let inst = BanditInstance::new("curve", vec![arm], 0.0, 200, family, true).unwrap();
        let a = cumulative_increment(&inst, m, 1.0).unwrap();
        let b = power_constraint_increment_sum(2.5, m, 1.0).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }

    /// Adding a common constant to every weight leaves the solver's choice
    /// unchanged on equal-size explicit families (weights kept inside the
    /// clamp range).
    #[test]
    fn argmax_shift_invariance(
        w0 in 0.0f64..1.0, w1 in 0.0f64..1.0, w2 in 0.0f64..1.0, w3 in 0.0f64..1.0,
        shift in 0.0f64..1.0,
    ) {
        let family = SuperArmFamily::explicit(
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
            Sense::Maximize,
        )
        .unwrap();
        let base = vec![w0, w1, w2, w3];
        let shifted: Vec<f64> = base.iter().map(|w| w + shift).collect();
        let a = solve(&family, &WeightVector::new(base).unwrap()).unwrap();
        let b = solve(&family, &WeightVector::new(shifted).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }
}

/// Shift invariance breaks on variable-size families: a common shift can
/// flip the preference between a small and a large super arm.
#[test]
fn shift_invariance_fails_for_variable_size_families() {
    let family = SuperArmFamily::explicit(vec![vec![0], vec![1, 2]], Sense::Maximize).unwrap();
    let base = WeightVector::new(vec![0.9, 0.4, 0.4]).unwrap();
    let shifted = WeightVector::new(vec![1.4, 0.9, 0.9]).unwrap();
    assert_eq!(solve(&family, &base).unwrap(), vec![0]); // 0.9 > 0.8
    assert_eq!(solve(&family, &shifted).unwrap(), vec![1, 2]); // 1.4 < 1.8
}
