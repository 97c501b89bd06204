use std::f64::consts::PI;

use crate::convexsolve::dd::{hrep_to_vertices, VertexEnumeration};
use crate::linalg::{self, dot};
use crate::{Error, Result};

use super::{AffineFrame, Polytope};

/// Volume-Lipschitz constant `2 m λ(B) (diam(Y) √(m / (2(m+1))))^{m−1}` for
/// subsets of a compact `Y ⊂ R^m`.
pub fn lebesgue_lipschitz_constant(diam_y: f64, m: usize) -> f64 {
    let mf = m as f64;
    let ball = PI.powf(mf / 2.0) / gamma_half_integer(m + 2);
    2.0 * mf * ball * super::jung_radius_bound(diam_y, m).powi(m as i32 - 1)
}

/// `Γ(n/2)` for a positive integer `n`.
fn gamma_half_integer(n: usize) -> f64 {
    if n % 2 == 0 {
        (1..n / 2).map(|i| i as f64).product()
    } else {
        // Γ(1/2) = √π, Γ(x+1) = xΓ(x)
        let mut g = PI.sqrt();
        let mut x = 0.5;
        while x + 1.0 <= n as f64 / 2.0 + 1e-12 {
            g *= x;
            x += 1.0;
        }
        g
    }
}

impl Polytope {
    /// Intersection; `None` when empty.
    pub fn intersect(&self, other: &Polytope) -> Result<Option<Polytope>> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: other.ambient_dim() });
        }
        let rows: Vec<Vec<f64>> = self.hrep.normals.iter().chain(&other.hrep.normals).cloned().collect();
        let rhs: Vec<f64> = self.hrep.offsets.iter().chain(&other.hrep.offsets).copied().collect();
        Self::from_rows_unchecked(&rows, &rhs, &self.tol)
    }

    /// Vertex enumeration of a system known to be bounded.
    pub(crate) fn from_rows_unchecked(rows: &[Vec<f64>], rhs: &[f64], tol: &crate::Tolerances) -> Result<Option<Polytope>> {
        match hrep_to_vertices(rows, rhs, tol.feas_tol) {
            VertexEnumeration::Vertices(v) => Ok(Some(Polytope::from_vrep(&v, tol)?)),
            VertexEnumeration::Empty => Ok(None),
            VertexEnumeration::Unbounded => Err(Error::Unbounded),
        }
    }

    /// Minkowski interpolation `(1 − t)·self + t·other`.
    pub fn minkowski_interpolate(&self, other: &Polytope, t: f64) -> Result<Polytope> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim(), got: other.ambient_dim() });
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                pts.push(p.iter().zip(q).map(|(a, b)| (1.0 - t) * a + t * b).collect());
            }
        }
        Polytope::from_vrep(&pts, &self.tol)
    }

    /// Minkowski sum.
    pub fn minkowski_sum(&self, other: &Polytope) -> Result<Polytope> {
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for p in &self.vertices {
            for q in &other.vertices {
                pts.push(linalg::add(p, q));
            }
        }
        Polytope::from_vrep(&pts, &self.tol)
    }

    /// Whether both polytopes span the same affine subspace.
    pub fn same_affine_hull(&self, other: &Polytope) -> bool {
        self.frame.same_subspace(&other.frame, self.tol.feas_tol * 10.0)
    }

    /// `λ_k(P Δ Q)` for polytopes sharing a `k`-dimensional affine hull.
    pub fn sym_diff_volume(&self, other: &Polytope) -> Result<f64> {
        if !self.same_affine_hull(other) {
            return Err(Error::AffineHullMismatch);
        }
        let k = self.dim();
        let inter = self.intersect(other)?.map_or(0.0, |i| i.measure_in_dim(k));
        Ok((self.volume() + other.volume() - 2.0 * inter).max(0.0))
    }

    /// Orthogonal projection onto the affine subspace `sub`.
    pub fn project(&self, sub: &AffineFrame) -> Result<Polytope> {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|v| sub.project(v)).collect();
        Polytope::from_vrep(&pts, &self.tol)
    }

    /// Sum of simplex volumes equals `volume()`; exposed for checks.
    pub fn simplex_volumes(&self) -> Vec<f64> {
        self.triangulate()
            .iter()
            .map(|s| super::hull::simplex_volume(&s.iter().map(|&i| &self.local[i]).collect::<Vec<_>>()))
            .collect()
    }

    /// Point of `P` maximising `⟨u, ·⟩` (first vertex on ties).
    pub fn argmax(&self, u: &[f64]) -> &[f64] {
        self.vertices
            .iter()
            .fold((&self.vertices[0], f64::NEG_INFINITY), |acc, v| {
                let s = dot(u, v);
                if s > acc.1 {
                    (v, s)
                } else {
                    acc
                }
            })
            .0
    }
}
