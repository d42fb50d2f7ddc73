use serde::{Deserialize, Serialize};

use crate::EngineError;

/// Parameters for randomized checking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckConfig {
    /// Randomized trials per axiom.
    pub trials: u32,
    /// Violations at or below this magnitude are treated as rounding.
    pub tolerance: f64,
    /// Root seed; all trial randomness derives from it.
    pub seed: u64,
    /// Upper bound for generated atom masses.
    pub max_mass: f64,
    /// Terms per convergent sequence in continuity checks.
    pub sequence_length: u32,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            trials: 1000,
            tolerance: 1e-9,
            seed: 0,
            max_mass: 10.0,
            sequence_length: 20,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |reason: &str| EngineError::InvalidConfig {
            reason: reason.to_string(),
        };
        if self.trials == 0 {
            return Err(bad("trials must be positive"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(bad("tolerance must be positive and finite"));
        }
        if !(self.max_mass > 0.0 && self.max_mass.is_finite()) {
            return Err(bad("max_mass must be positive and finite"));
        }
        if self.sequence_length == 0 {
            return Err(bad("sequence_length must be positive"));
        }
        Ok(())
    }
}
