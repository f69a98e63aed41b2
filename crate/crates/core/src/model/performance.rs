use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The statistic of future reward used as the performance function.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PerformanceSpec {
    /// Expected reward of the next transition (discounted with γ = 0).
    Myopic,
    /// Expected discounted sum of future rewards.
    Discounted { gamma: f64 },
    /// Long-run average reward (Cesàro limit of the chain).
    Average,
}

impl PerformanceSpec {
    pub fn validate(&self) -> Result<()> {
        if let PerformanceSpec::Discounted { gamma } = *self {
            if !(0.0..1.0).contains(&gamma) {
                return Err(Error::input(format!("discount {gamma} outside [0, 1)")));
            }
        }
        Ok(())
    }

    /// Discount factor when the statistic is a discounted sum.
    pub fn discount(&self) -> Option<f64> {
        match *self {
            PerformanceSpec::Myopic => Some(0.0),
            PerformanceSpec::Discounted { gamma } => Some(gamma),
            PerformanceSpec::Average => None,
        }
    }

    /// `(v_min, v_max)` implied by per-transition reward bounds.
    pub fn value_bounds(&self, r_min: f64, r_max: f64) -> (f64, f64) {
        match self.discount() {
            Some(g) => (r_min / (1.0 - g), r_max / (1.0 - g)),
            None => (r_min, r_max),
        }
    }
}
