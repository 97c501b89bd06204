//! Convex polytope kernel: dual representation, intrinsic measures, metrics
//! between polytopes and the convex-body maps used by the selection and
//! decomposition constructions.
//!
//! Every polytope carries an [`AffineFrame`] for its affine hull. Measures
//! are intrinsic: `volume` of a `k`-dimensional polytope is its
//! `k`-dimensional Hausdorff measure, with the convention that a single
//! point has measure 1 (so the uniform law on a singleton is a Dirac mass).

mod hull;
mod measures;
mod metrics;
mod ops;
mod steiner;

use std::sync::OnceLock;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::convexsolve::dd::{hrep_to_vertices, Facet, VertexEnumeration};
use crate::convexsolve::{lp_solve, LpProblem, LpStatus};
use crate::linalg::{self, dot, left_svd, sub};
use crate::scalar::Scalar;
use crate::{Error, Result, Tolerances};

pub use measures::jung_radius_bound;
pub use ops::lebesgue_lipschitz_constant;
pub(crate) use steiner::sphere_nodes;

/// Orthonormal frame `origin + span(basis)` of an affine subspace of `R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineFrame {
    pub origin: Vec<f64>,
    /// `k` orthonormal columns, each an `m`-vector.
    pub basis: Vec<Vec<f64>>,
}

impl AffineFrame {
    pub fn new(origin: Vec<f64>, basis: Vec<Vec<f64>>) -> Self {
        Self { origin, basis }
    }

    /// Linear subspace through the origin.
    pub fn linear(m: usize, basis: Vec<Vec<f64>>) -> Self {
        Self { origin: vec![0.0; m], basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.origin.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_local(&self, y: &[f64]) -> Vec<f64> {
        let d = sub(y, &self.origin);
        self.basis.iter().map(|b| dot(b, &d)).collect()
    }

    pub fn to_ambient(&self, t: &[f64]) -> Vec<f64> {
        let mut y = self.origin.clone();
        for (b, ti) in self.basis.iter().zip(t) {
            linalg::axpy(&mut y, *ti, b);
        }
        y
    }

    /// Orthogonal projection onto the affine subspace.
    pub fn project(&self, y: &[f64]) -> Vec<f64> {
        self.to_ambient(&self.to_local(y))
    }

    /// Orthonormal basis of the orthogonal complement of the direction space.
    pub fn complement(&self) -> Vec<Vec<f64>> {
        linalg::complement(&self.basis, self.ambient_dim())
    }

    /// Largest deviation of `basisᵀ·basis` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(a, b) - target).abs());
            }
        }
        worst
    }

    /// Whether both frames describe the same affine subspace.
    pub fn same_subspace(&self, other: &AffineFrame, tol: f64) -> bool {
        if self.dim() != other.dim() || self.ambient_dim() != other.ambient_dim() {
            return false;
        }
        let residual = |v: &[f64], f: &AffineFrame| {
            let mut w = v.to_vec();
            for b in &f.basis {
                let c = dot(&w, b);
                linalg::axpy(&mut w, -c, b);
            }
            linalg::norm(&w)
        };
        let dirs_ok = self.basis.iter().all(|b| residual(b, other) <= 1e-7);
        let offset = sub(&self.origin, &other.origin);
        let scale = 1.0 + linalg::norm(&self.origin).max(linalg::norm(&other.origin));
        dirs_ok && residual(&offset, other) <= tol * scale
    }
}

/// Half-space description `normals·y <= offsets` (unit normals).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HRep {
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

/// Nonempty compact convex polytope in `R^m` held in both vertex and
/// half-space form.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(into = "PolytopeRepr", try_from = "PolytopeRepr")]
pub struct Polytope {
    vertices: Vec<Vec<f64>>,
    frame: AffineFrame,
    /// Vertices in frame coordinates (same order as `vertices`).
    local: Vec<Vec<f64>>,
    /// Intrinsic facets in frame coordinates with unit normals.
    facets: Vec<Facet>,
    hrep: HRep,
    tol: Tolerances,
    volume: OnceLock<f64>,
    simplices: OnceLock<Vec<Vec<usize>>>,
}

/// Serialized form: the vertex list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolytopeRepr {
    pub vertices: Vec<Vec<f64>>,
}

impl From<Polytope> for PolytopeRepr {
    fn from(p: Polytope) -> Self {
        Self { vertices: p.vertices }
    }
}

impl TryFrom<PolytopeRepr> for Polytope {
    type Error = Error;
    fn try_from(r: PolytopeRepr) -> Result<Self> {
        Polytope::from_vrep(&r.vertices, &Tolerances::default())
    }
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Polytope {
    /// Convex hull of a finite point set.
    pub fn from_vrep(points: &[Vec<f64>], tol: &Tolerances) -> Result<Self> {
        tol.validate()?;
        let first = points.first().ok_or(Error::EmptyInput)?;
        let m = first.len();
        if let Some(p) = points.iter().find(|p| p.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: p.len() });
        }
        if points.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("vertex coordinates"));
        }
        let pts = dedup(points, tol.feas_tol);

        let (k, basis) = intrinsic_basis(&pts, m, tol)?;
        let origin0 = linalg::mean(&pts);
        let frame0 = AffineFrame::new(origin0, basis.clone());
        let local0: Vec<Vec<f64>> = pts.iter().map(|p| frame0.to_local(p)).collect();
        let (ext, _) = hull::local_hull(&local0, k, tol.feas_tol);

        let vertices: Vec<Vec<f64>> = ext.iter().map(|&i| pts[i].clone()).collect();
        let frame = AffineFrame::new(linalg::mean(&vertices), basis);
        let local: Vec<Vec<f64>> = vertices.iter().map(|p| frame.to_local(p)).collect();
        let (ext2, facets) = hull::local_hull(&local, k, tol.feas_tol);
        debug_assert_eq!(ext2.len(), local.len());
        let hrep = ambient_hrep(&frame, &facets);
        Ok(Self {
            vertices,
            frame,
            local,
            facets,
            hrep,
            tol: *tol,
            volume: OnceLock::new(),
            simplices: OnceLock::new(),
        })
    }

    /// Polytope `{y : m·y <= q}`; fails when the system is infeasible or has
    /// a recession direction.
    pub fn from_hrep(m: &[Vec<f64>], q: &[f64], tol: &Tolerances) -> Result<Self> {
        Self::from_hrep_with(m, q, tol, false)
    }

    /// As [`Polytope::from_hrep`]; `exact` runs the vertex enumeration in
    /// rational arithmetic.
    pub fn from_hrep_with(m: &[Vec<f64>], q: &[f64], tol: &Tolerances, exact: bool) -> Result<Self> {
        let dim = m.first().map_or(0, |r| r.len());
        check_bounded_feasible(m, q, dim, tol)?;
        if exact {
            let rows: Vec<Vec<BigRational>> =
                m.iter().map(|r| r.iter().map(|&v| BigRational::from_f64(v)).collect()).collect();
            let rhs: Vec<BigRational> = q.iter().map(|&v| BigRational::from_f64(v)).collect();
            Self::from_rational_hrep(&rows, &rhs, tol)
        } else {
            match hrep_to_vertices(m, q, tol.feas_tol) {
                VertexEnumeration::Vertices(v) => Self::from_vrep(&v, tol),
                VertexEnumeration::Empty => Err(Error::Infeasible),
                VertexEnumeration::Unbounded => Err(Error::Unbounded),
            }
        }
    }

    /// Exact vertex enumeration of a rational system (no feasibility LPs).
    pub(crate) fn from_rational_hrep(rows: &[Vec<BigRational>], rhs: &[BigRational], tol: &Tolerances) -> Result<Self> {
        match hrep_to_vertices(rows, rhs, 0.0) {
            VertexEnumeration::Vertices(v) => {
                let v: Vec<Vec<f64>> = v.iter().map(|p| p.iter().map(Scalar::to_f64).collect()).collect();
                Self::from_vrep(&v, tol)
            }
            VertexEnumeration::Empty => Err(Error::Infeasible),
            VertexEnumeration::Unbounded => Err(Error::Unbounded),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.ambient_dim()
    }

    /// Intrinsic (affine) dimension.
    pub fn dim(&self) -> usize {
        self.frame.dim()
    }

    /// Extreme points in lexicographic order.
    pub fn vertices(&self) -> &[Vec<f64>] {
        &self.vertices
    }

    pub fn frame(&self) -> &AffineFrame {
        &self.frame
    }

    pub fn hrep(&self) -> &HRep {
        &self.hrep
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub(crate) fn local_vertices(&self) -> &[Vec<f64>] {
        &self.local
    }

    pub(crate) fn local_facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn contains(&self, y: &[f64], tol: f64) -> bool {
        self.hrep.normals.iter().zip(&self.hrep.offsets).all(|(a, b)| dot(a, y) <= b + tol)
    }

    /// Whether `y` lies in the relative interior (strictly inside every
    /// intrinsic facet, on the affine hull within `feas_tol`).
    pub fn in_relative_interior(&self, y: &[f64]) -> bool {
        let t = self.frame.to_local(y);
        let back = self.frame.to_ambient(&t);
        if linalg::dist(&back, y) > self.tol.feas_tol {
            return false;
        }
        self.facets.iter().all(|f| f.offset - dot(&f.normal, &t) > 0.0)
    }

    /// Simplices (as vertex-index lists) triangulating the polytope in its
    /// affine hull.
    pub fn triangulate(&self) -> &[Vec<usize>] {
        self.simplices
            .get_or_init(|| hull::triangulate(&self.local, self.dim(), &self.facets, self.tol.feas_tol))
    }

    /// Intrinsic `k`-volume `λ_k`; 1 for a point.
    pub fn volume(&self) -> f64 {
        *self.volume.get_or_init(|| {
            if self.dim() == 0 {
                return 1.0;
            }
            self.triangulate()
                .iter()
                .map(|s| hull::simplex_volume(&s.iter().map(|&i| &self.local[i]).collect::<Vec<_>>()))
                .sum()
        })
    }

    /// `λ_j` of the polytope: its volume when `j` equals its dimension, 0 below
    /// that and `+∞` above.
    pub fn measure_in_dim(&self, j: usize) -> f64 {
        use std::cmp::Ordering::*;
        match self.dim().cmp(&j) {
            Less => 0.0,
            Equal => self.volume(),
            Greater => f64::INFINITY,
        }
    }

    /// Barycentre of the uniform measure.
    pub fn centroid(&self) -> Vec<f64> {
        if self.dim() == 0 {
            return self.vertices[0].clone();
        }
        let mut acc = vec![0.0; self.ambient_dim()];
        let mut total = 0.0;
        for s in self.triangulate() {
            let pts: Vec<&Vec<f64>> = s.iter().map(|&i| &self.local[i]).collect();
            let vol = hull::simplex_volume(&pts);
            let amb: Vec<Vec<f64>> = s.iter().map(|&i| self.vertices[i].clone()).collect();
            linalg::axpy(&mut acc, vol, &linalg::mean(&amb));
            total += vol;
        }
        linalg::scale(&acc, 1.0 / total)
    }

    pub fn translate(&self, v: &[f64]) -> Result<Self> {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|p| linalg::add(p, v)).collect();
        Self::from_vrep(&pts, &self.tol)
    }

    /// Homothety `s·P` about the coordinate origin.
    pub fn scale(&self, s: f64) -> Result<Self> {
        let pts: Vec<Vec<f64>> = self.vertices.iter().map(|p| linalg::scale(p, s)).collect();
        Self::from_vrep(&pts, &self.tol)
    }

    pub fn with_tolerances(&self, tol: &Tolerances) -> Result<Self> {
        Self::from_vrep(&self.vertices, tol)
    }
}

/// Merge points closer than `tol` (first occurrence in lexicographic order wins).
fn dedup(points: &[Vec<f64>], tol: f64) -> Vec<Vec<f64>> {
    let mut sorted: Vec<Vec<f64>> = points.to_vec();
    sorted.sort_by(|a, b| linalg::lex_cmp(a, b));
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(sorted.len());
    for p in sorted {
        if !out.iter().any(|q| linalg::dist(q, &p) <= tol) {
            out.push(p);
        }
    }
    out
}

/// Intrinsic dimension and an orthonormal basis of the direction space.
fn intrinsic_basis(pts: &[Vec<f64>], m: usize, tol: &Tolerances) -> Result<(usize, Vec<Vec<f64>>)> {
    if pts.len() == 1 {
        return Ok((0, Vec::new()));
    }
    let origin = linalg::mean(pts);
    let diffs: Vec<Vec<f64>> = pts.iter().map(|p| sub(p, &origin)).collect();
    let (sv, u) = left_svd(&diffs, m);
    let smax = sv[0];
    let mut k = 0;
    for &s in &sv {
        let ratio = s / smax;
        if ratio > tol.rank_tol / 10.0 && ratio <= tol.rank_tol * 10.0 {
            return Err(Error::NumericalRankAmbiguity { ratio, rank_tol: tol.rank_tol });
        }
        if ratio > tol.rank_tol {
            k += 1;
        }
    }
    if k == m {
        let id = (0..m).map(|i| (0..m).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        return Ok((m, id));
    }
    let basis = u
        .into_iter()
        .take(k)
        .map(|mut b| {
            linalg::canonical_sign(&mut b);
            b
        })
        .collect();
    Ok((k, basis))
}

fn ambient_hrep(frame: &AffineFrame, facets: &[Facet]) -> HRep {
    let mut normals = Vec::new();
    let mut offsets = Vec::new();
    for f in facets {
        let a = frame.to_ambient(&f.normal);
        let a = sub(&a, &frame.origin);
        offsets.push(f.offset + dot(&a, &frame.origin));
        normals.push(a);
    }
    for w in frame.complement() {
        let c = dot(&w, &frame.origin);
        normals.push(linalg::scale(&w, -1.0));
        offsets.push(-c);
        normals.push(w);
        offsets.push(c);
    }
    HRep { normals, offsets }
}

fn check_bounded_feasible(m: &[Vec<f64>], q: &[f64], dim: usize, tol: &Tolerances) -> Result<()> {
    let feas = lp_solve(&LpProblem::new(vec![0.0; dim], m.to_vec(), q.to_vec())?, false, tol.feas_tol);
    if feas.status == LpStatus::Infeasible {
        return Err(Error::Infeasible);
    }
    let zeros = vec![0.0; m.len()];
    for j in 0..dim {
        for s in [-1.0, 1.0] {
            let mut c = vec![0.0; dim];
            c[j] = s;
            let r = lp_solve(&LpProblem { objective: c, constraints: m.to_vec(), rhs: zeros.clone() }, false, tol.feas_tol);
            if r.status == LpStatus::Unbounded {
                return Err(Error::Unbounded);
            }
        }
    }
    Ok(())
}
