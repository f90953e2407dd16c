//! Mean-outcome functions over pull counts.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::KahanSum;

/// Closed-form shape of a mean-outcome function. Pull counts are 1-based:
/// `mu(n)` is the expected outcome of the n-th pull of the arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Shape {
    /// `mu(n) = value`.
    Constant { value: f64 },
    /// `mu(n) = min(slope * n, plateau)`.
    PiecewiseLinearSaturating { slope: f64, plateau: f64 },
    /// `mu(n) = start + amplitude * sum_{m=1..n} (m + index_shift)^(-exponent)`,
    /// optionally frozen at its value for `n = saturate_after` beyond that
    /// pull count.
    PowerLawSaturating {
        start: f64,
        amplitude: f64,
        exponent: f64,
        #[serde(default)]
        index_shift: u32,
        #[serde(default)]
        saturate_after: Option<u64>,
    },
    /// Explicit per-pull table; `values[n-1]` is `mu(n)`. Universal fallback.
    Tabulated { values: Vec<f64> },
}

/// A mean-outcome function together with its domain `[1, horizon]`.
///
/// Evaluation is pure; prefix sums are cached after the first cumulative
/// query, so instances stay cheap to share across runs.
#[derive(Debug, Serialize, Deserialize)]
pub struct RisingFunction {
    #[serde(flatten)]
    shape: Shape,
    horizon: u64,
    #[serde(skip)]
    values: OnceLock<Vec<f64>>,
    #[serde(skip)]
    prefix: OnceLock<Vec<f64>>,
}

impl Clone for RisingFunction {
    fn clone(&self) -> Self {
        // Caches are rebuilt on demand; cloning the shape is enough.
        RisingFunction::new(self.shape.clone(), self.horizon).expect("clone of validated function")
    }
}

impl PartialEq for RisingFunction {
    fn eq(&self, other: &Self) -> bool {
        self.shape == other.shape && self.horizon == other.horizon
    }
}

impl RisingFunction {
    pub fn new(shape: Shape, horizon: u64) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::parameter("horizon", "must be at least 1"));
        }
        let finite = match &shape {
            Shape::Constant { value } => value.is_finite(),
            Shape::PiecewiseLinearSaturating { slope, plateau } => {
                slope.is_finite() && plateau.is_finite() && *slope >= 0.0
            }
            Shape::PowerLawSaturating {
                start,
                amplitude,
                exponent,
                ..
            } => {
                start.is_finite()
                    && amplitude.is_finite()
                    && exponent.is_finite()
                    && *amplitude >= 0.0
                    && *exponent > 0.0
            }
            Shape::Tabulated { values } => {
                values.len() as u64 >= horizon && values.iter().all(|v| v.is_finite())
            }
        };
        if !finite {
            return Err(Error::parameter(
                "shape",
                "parameters must be finite (tabulated values must cover the horizon)",
            ));
        }
        Ok(RisingFunction {
            shape,
            horizon,
            values: OnceLock::new(),
            prefix: OnceLock::new(),
        })
    }

    pub fn constant(value: f64, horizon: u64) -> Result<Self> {
        RisingFunction::new(Shape::Constant { value }, horizon)
    }

    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        let horizon = values.len() as u64;
        RisingFunction::new(Shape::Tabulated { values }, horizon)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    fn check_pull(&self, n: u64) -> Result<()> {
        if n < 1 || n > self.horizon {
            return Err(Error::OutOfRange {
                what: "pull count",
                index: n,
                min: 1,
                max: self.horizon,
            });
        }
        Ok(())
    }

    /// `mu(n)`: mean outcome of the n-th pull, `1 <= n <= horizon`.
    pub fn value(&self, n: u64) -> Result<f64> {
        self.check_pull(n)?;
        Ok(match &self.shape {
            Shape::Constant { value } => *value,
            Shape::PiecewiseLinearSaturating { slope, plateau } => {
                (slope * n as f64).min(*plateau)
            }
            Shape::PowerLawSaturating { .. } => self.value_table()[n as usize],
            Shape::Tabulated { values } => values[(n - 1) as usize],
        })
    }

    /// `gamma(n) = mu(n+1) - mu(n)`, defined for `1 <= n <= horizon - 1`.
    pub fn increment(&self, n: u64) -> Result<f64> {
        self.check_pull(n + 1)?;
        Ok(self.value(n + 1)? - self.value(n)?)
    }

    /// `F(n) = sum_{m=1..n} mu(m)`, with `F(0) = 0`.
    pub fn cumulative(&self, n: u64) -> Result<f64> {
        if n > self.horizon {
            return Err(Error::OutOfRange {
                what: "cumulative pull count",
                index: n,
                min: 0,
                max: self.horizon,
            });
        }
        Ok(self.prefix_table()[n as usize])
    }

    fn value_table(&self) -> &[f64] {
        self.values.get_or_init(|| {
            let n = self.horizon as usize;
            let mut table = vec![0.0; n + 1];
            if let Shape::PowerLawSaturating {
                start,
                amplitude,
                exponent,
                index_shift,
                saturate_after,
            } = &self.shape
            {
                let mut acc = KahanSum::default();
                let cap = saturate_after.unwrap_or(u64::MAX);
                let mut frozen = f64::NAN;
                for m in 1..=self.horizon {
                    acc.add((m as f64 + *index_shift as f64).powf(-exponent));
                    let v = if m <= cap {
                        let v = start + amplitude * acc.value();
                        if m == cap {
                            frozen = v;
                        }
                        v
                    } else {
                        frozen
                    };
                    table[m as usize] = v;
                }
            }
            table
        })
    }

    fn prefix_table(&self) -> &[f64] {
        self.prefix.get_or_init(|| {
            let n = self.horizon as usize;
            let mut table = vec![0.0; n + 1];
            let mut acc = KahanSum::default();
            for m in 1..=self.horizon {
                acc.add(self.value(m).expect("in-domain pull"));
                table[m as usize] = acc.value();
            }
            table
        })
    }
}
