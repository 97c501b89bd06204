use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Numerical configuration threaded through every computation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Absolute slack for inequality feasibility and point merging.
    pub feas_tol: f64,
    /// Relative singular-value threshold used to decide intrinsic dimension.
    pub rank_tol: f64,
    /// Number of sphere nodes for the Steiner point when the ambient dimension is at least 3.
    pub sphere_nodes: usize,
    /// Seed for every randomized routine.
    pub rng_seed: u64,
    /// Largest polynomial degree accepted by the exact quadrature path.
    pub degree_cap: u32,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            feas_tol: 1e-9,
            rank_tol: 1e-9,
            sphere_nodes: 20_000,
            rng_seed: 0x5eed,
            degree_cap: 8,
        }
    }
}

impl Tolerances {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.feas_tol > 0.0
            && self.feas_tol.is_finite()
            && self.rank_tol > 0.0
            && self.rank_tol.is_finite()
            && self.sphere_nodes > 0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("tolerances must be strictly positive: {self:?}")))
        }
    }
}
