//! The future-potential estimator shared by CRUCB (per base arm) and
//! R-ed-UCB (per super arm).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::policies::ArmHistory;

/// Estimator configuration: window fraction and the known noise scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrucbConfig {
    pub epsilon: f64,
    pub sigma: f64,
}

impl CrucbConfig {
    pub fn new(epsilon: f64, sigma: f64) -> Result<Self> {
        if !(0.0 < epsilon && epsilon < 0.5) {
            return Err(Error::parameter("epsilon", "must lie in (0, 1/2)"));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(Error::parameter("sigma", "must be finite and nonnegative"));
        }
        Ok(CrucbConfig { epsilon, sigma })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuturePotential {
    /// Windowed mean-plus-slope extrapolation of the outcome at time t.
    pub mu_hat: f64,
    /// Confidence width; zero when sigma is zero.
    pub beta: f64,
    /// `mu_hat + beta`, the optimistic index handed to the solver.
    pub mu_acute: f64,
    /// Window size actually used, `max(1, floor(epsilon * N))`.
    pub window: u64,
}

/// Future potential of an arm with history `hist` at time `t`:
///
/// ```text
/// h      = max(1, floor(epsilon * N))
/// mu_hat = (1/h) * sum_{l=N-h+1..N} [ X(l) + (t - l) * (X(l) - X(l-h)) / h ]
/// beta   = sigma * (t - N + h - 1) * sqrt(30 * ln(max(t, 2)) / h^3)
/// ```
///
/// where `N` is the pull count before time t. Needs `N >= 2`; callers treat
/// the error as a forced-exploration signal. Computed from prefix sums, so
/// each call is O(1).
pub fn crucb_future_potential(
    hist: &ArmHistory,
    t: u64,
    cfg: &CrucbConfig,
) -> Result<FuturePotential> {
    let n = hist.len();
    if n < 2 {
        return Err(Error::InsufficientHistory { pulls: n, needed: 2 });
    }
    let h = ((cfg.epsilon * n as f64).floor() as u64).max(1);
    debug_assert!(2 * h <= n, "epsilon < 1/2 keeps both windows inside history");

    let s1_recent = hist.sum(n - h + 1, n);
    let s2_recent = hist.weighted_sum(n - h + 1, n);
    let s1_lagged = hist.sum(n - 2 * h + 1, n - h);
    let s2_lagged = hist.weighted_sum(n - 2 * h + 1, n - h);

    let (tf, hf) = (t as f64, h as f64);
    let mu_hat = s1_recent / hf
        + (tf * s1_recent - s2_recent - (tf - hf) * s1_lagged + s2_lagged) / (hf * hf);

    let horizon_gap = (tf - n as f64 + hf - 1.0).max(0.0);
    let log_term = (t.max(2) as f64).ln();
    let beta = cfg.sigma * horizon_gap * (30.0 * log_term / hf.powi(3)).sqrt();

    Ok(FuturePotential {
        mu_hat,
        beta,
        mu_acute: mu_hat + beta,
        window: h,
    })
}
