//! Simulation laboratory for the combinatorial rising bandit.
//!
//! A combinatorial rising bandit is a semi-bandit problem in which every base
//! arm (for example a graph edge) carries a nondecreasing mean-outcome
//! function of its own pull count, and an action (a *super arm*) is a feasible
//! combination of base arms such as a path, a spanning tree, or a matching.
//!
//! The crate provides:
//!
//! - [`rising`]: rising outcome functions, bandit instances, instance
//!   generators, and the semi-bandit environment step;
//! - [`solvers`]: task-specific combinatorial optimizers (DAG shortest path,
//!   Kruskal spanning tree, max-weight bipartite matching) plus enumeration
//!   utilities used as oracles and by super-arm-level baselines;
//! - [`policies`]: the CRUCB policy and the baselines R-ed-UCB, SW-UCB,
//!   SW-TS, SW-CUCB, SW-CTS, and constant policies;
//! - [`metrics`]: oracle constant policies, policy-regret curves, the
//!   cumulative-increment difficulty measure, brute-force optimality checks,
//!   and regret bound calculators;
//! - [`harness`]: a reproducible experiment runner with CSV/JSON outputs.

pub mod error;
pub mod harness;
pub mod metrics;
pub mod policies;
pub mod rising;
pub mod solvers;
mod util;

pub use error::{Error, Result};
