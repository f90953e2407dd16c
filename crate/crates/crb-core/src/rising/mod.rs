//! Rising outcome functions, bandit instances, generators, and the
//! semi-bandit environment.

mod env;
pub(crate) mod family;
mod function;
mod generators;
mod instance;

pub use env::{env_step, EnvState, FeedbackRecord};
pub use family::{FamilyRepr, GraphTask, Sense, SuperArmFamily};
pub use function::{RisingFunction, Shape};
pub use generators::{
    generator_catalog, make_by_name, make_constrained_pair, make_kmax_counterexample,
    make_lower_bound_pair, make_synthetic_instance, ConstrainedPairParams, KmaxParams,
    LowerBoundPairParams, PairVariant, SyntheticGraph, SyntheticParams,
};
pub use instance::{
    kmax_reward, validate_instance, ArmFinding, BanditInstance, FindingKind, RewardKind,
    ValidationReport,
};
