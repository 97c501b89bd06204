use crate::convexsolve::min_norm_point;
use crate::linalg::{self, dot};
use crate::{Error, Result};

use super::Polytope;

/// Relative optimality gap used for the internal min-norm-point solves.
const MNP_GAP: f64 = 1e-14;

impl Polytope {
    /// Euclidean distance from `y` and the metric projection of `y` onto the
    /// polytope.
    pub fn dist_point(&self, y: &[f64]) -> Result<(f64, Vec<f64>)> {
        if y.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: y.len() });
        }
        let shifted: Vec<Vec<f64>> = self.vertices.iter().map(|v| linalg::sub(v, y)).collect();
        let p = min_norm_point(&shifted, MNP_GAP)?;
        let proj = linalg::add(&p, y);
        let d = linalg::norm(&p);
        // variational inequality ⟨y − p, v − p⟩ <= tol
        let r = linalg::sub(y, &proj);
        let scale = 1.0 + shifted.iter().map(|v| linalg::norm(v)).fold(0.0, f64::max);
        let worst = self
            .vertices
            .iter()
            .map(|v| dot(&r, &linalg::sub(v, &proj)))
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > self.tol.feas_tol * scale * scale {
            return Err(Error::SolverStall { iterations: 0 });
        }
        Ok((d, proj))
    }

    /// Excess `e(self, other) = max_{v ∈ self} d(v, other)`.
    pub fn excess(&self, other: &Polytope) -> Result<f64> {
        let mut e = 0.0f64;
        for v in &self.vertices {
            e = e.max(other.dist_point(v)?.0);
        }
        Ok(e)
    }

    /// Hausdorff distance. The excess over a polytope is attained at a vertex
    /// because `d(·, Q)` is convex.
    pub fn hausdorff(&self, other: &Polytope) -> Result<f64> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: other.ambient_dim() });
        }
        Ok(self.excess(other)?.max(other.excess(self)?))
    }
}
