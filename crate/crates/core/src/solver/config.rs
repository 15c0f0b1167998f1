use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Slack added to the incumbent length when tightening the length bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slack {
    /// `ε = factor · L₀`.
    Relative(f64),
    /// Fixed `ε` in plane units.
    Absolute(f64),
}

impl Slack {
    pub fn resolve(self, first_length: f64) -> f64 {
        match self {
            Slack::Relative(f) => f * first_length.max(1e-9),
            Slack::Absolute(e) => e,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    pub multistart_count: usize,
    pub seed: u64,
    pub epsilon_globalize: Slack,
    pub max_global_rounds: usize,
    pub max_inner_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            feasibility_tol: 1e-10,
            optimality_tol: 1e-8,
            multistart_count: 64,
            seed: 0x5eed_d0b1,
            epsilon_globalize: Slack::Relative(1e-3),
            max_global_rounds: 8,
            max_inner_iterations: 200,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let in_range = |v: f64| v > 0.0 && v <= 1e-2;
        if !in_range(self.feasibility_tol) {
            return Err(invalid(format!(
                "feasibility_tol must lie in (0, 1e-2], got {}",
                self.feasibility_tol
            )));
        }
        if !in_range(self.optimality_tol) {
            return Err(invalid(format!(
                "optimality_tol must lie in (0, 1e-2], got {}",
                self.optimality_tol
            )));
        }
        let eps = match self.epsilon_globalize {
            Slack::Relative(v) | Slack::Absolute(v) => v,
        };
        if !(eps.is_finite() && eps > 0.0) {
            return Err(invalid(format!(
                "epsilon_globalize must be positive, got {eps}"
            )));
        }
        if self.multistart_count == 0
            || self.max_global_rounds == 0
            || self.max_inner_iterations == 0
        {
            return Err(invalid(
                "multistart_count, max_global_rounds and max_inner_iterations must be positive",
            ));
        }
        Ok(())
    }
}
