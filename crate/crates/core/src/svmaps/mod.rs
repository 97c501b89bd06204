//! Parametric polytope-valued maps `x ↦ S(x)` and the constructions built on
//! them: bilevel solution maps, rectangular decompositions and selections.

mod bilevel;
mod decomposition;
mod selections;

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geomkernel::Polytope;
use crate::{Error, Result, Tolerances};

pub use bilevel::{bilevel_solution, eps_argmin, BilevelLinearSpec};
pub use decomposition::{h_ratio, rect_decompose, RectDecomposition, SandwichCheck};
pub use selections::{
    dim_profile, frame_selection, lipschitz_selection, steiner_selection, FrameSelection, LipschitzSelection,
};

/// Parameter space of a map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// `[0, 1)` with `d(x, x') = min(|x − x'|, 1 − |x − x'|)`.
    Circle,
}

impl Domain {
    pub fn unit_interval() -> Self {
        Domain::Box { lo: vec![0.0], hi: vec![1.0] }
    }

    pub fn dim(&self) -> usize {
        match self {
            Domain::Box { lo, .. } => lo.len(),
            Domain::Circle => 1,
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        if x.len() != self.dim() || x.iter().any(|v| !v.is_finite()) {
            return false;
        }
        match self {
            Domain::Box { lo, hi } => x.iter().zip(lo.iter().zip(hi)).all(|(v, (l, h))| *v >= l - 1e-12 && *v <= h + 1e-12),
            Domain::Circle => true,
        }
    }

    pub fn dist(&self, x: &[f64], xp: &[f64]) -> f64 {
        match self {
            Domain::Box { .. } => crate::linalg::dist(x, xp),
            Domain::Circle => {
                let d = (x[0] - xp[0]).rem_euclid(1.0);
                d.min(1.0 - d)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Domain::Box { lo, hi } if lo.len() != hi.len() || lo.iter().zip(hi).any(|(l, h)| !(l <= h)) => {
                Err(Error::InvalidSpec("domain box is empty or malformed".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Row `(a + Σ x_i a_x[i])·y <= b + Σ x_i b_x[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineRow {
    pub a: Vec<f64>,
    #[serde(default)]
    pub a_x: Vec<Vec<f64>>,
    pub b: f64,
    #[serde(default)]
    pub b_x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapKind {
    /// `conv{(0,0), (1,0), (1,x), (x^{1/4}, x)}`.
    Trapezoid,
    /// `conv{(0,−x), (1,−x), (1,x^q), (0,0)}`.
    QMap { q: f64 },
    /// `2 conv{γ(x), −γ(x)}`, `γ(x) = (cos πx, sin πx)`.
    RotSeg,
    /// `(1 − x) A + x B`.
    Interp { a: Polytope, b: Polytope },
    BilevelLinear { spec: BilevelLinearSpec },
    EpsArgmin { spec: BilevelLinearSpec, eps: f64 },
    GenericAffine { rows: Vec<AffineRow> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSpec {
    #[serde(flatten)]
    pub kind: MapKind,
    pub domain: Domain,
    /// Rational arithmetic for the bilevel kinds.
    #[serde(default)]
    pub exact: bool,
}

impl MapSpec {
    pub fn trapezoid() -> Self {
        Self { kind: MapKind::Trapezoid, domain: Domain::unit_interval(), exact: false }
    }

    pub fn qmap(q: f64) -> Self {
        Self { kind: MapKind::QMap { q }, domain: Domain::unit_interval(), exact: false }
    }

    pub fn rotseg() -> Self {
        Self { kind: MapKind::RotSeg, domain: Domain::Circle, exact: false }
    }

    pub fn interp(a: Polytope, b: Polytope) -> Self {
        Self { kind: MapKind::Interp { a, b }, domain: Domain::unit_interval(), exact: false }
    }

    /// Solution map with domain the `x`-projection box of `D`.
    pub fn bilevel(spec: BilevelLinearSpec, tol: &Tolerances) -> Result<Self> {
        let (lo, hi) = spec.x_bounds(tol)?;
        Ok(Self { kind: MapKind::BilevelLinear { spec }, domain: Domain::Box { lo, hi }, exact: false })
    }

    pub fn eps_argmin(spec: BilevelLinearSpec, eps: f64, tol: &Tolerances) -> Result<Self> {
        let (lo, hi) = spec.x_bounds(tol)?;
        let s = Self { kind: MapKind::EpsArgmin { spec, eps }, domain: Domain::Box { lo, hi }, exact: false };
        s.validate()?;
        Ok(s)
    }

    pub fn with_exact(mut self, exact: bool) -> Self {
        self.exact = exact;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.domain.validate()?;
        match &self.kind {
            MapKind::QMap { q } if !(*q >= 1.0) => Err(Error::InvalidSpec(format!("q must be >= 1, got {q}"))),
            MapKind::EpsArgmin { eps, .. } if !(*eps > 0.0) => {
                Err(Error::InvalidSpec(format!("eps must be positive, got {eps}")))
            }
            MapKind::Interp { a, b } if a.ambient_dim() != b.ambient_dim() => {
                Err(Error::DimensionMismatch { expected: a.ambient_dim(), got: b.ambient_dim() })
            }
            MapKind::BilevelLinear { spec } | MapKind::EpsArgmin { spec, .. } => spec.validate_shape(),
            _ => Ok(()),
        }
    }

    /// Dimension of the outcome space.
    pub fn outcome_dim(&self) -> usize {
        match &self.kind {
            MapKind::Trapezoid | MapKind::QMap { .. } | MapKind::RotSeg => 2,
            MapKind::Interp { a, .. } => a.ambient_dim(),
            MapKind::BilevelLinear { spec } | MapKind::EpsArgmin { spec, .. } => spec.c.len(),
            MapKind::GenericAffine { rows } => rows.first().map_or(0, |r| r.a.len()),
        }
    }

    /// Parameter distance (circle metric for [`Domain::Circle`]).
    pub fn dist(&self, x: &[f64], xp: &[f64]) -> f64 {
        self.domain.dist(x, xp)
    }

    /// Compact box `Y` containing every image: fixed for the built-in maps,
    /// the `y`-projection of `D` for the bilevel kinds, and the bounding box
    /// of the images on `grid` otherwise.
    pub fn outcome_box(&self, grid: &[Vec<f64>], tol: &Tolerances) -> Result<(Vec<f64>, Vec<f64>)> {
        match &self.kind {
            MapKind::Trapezoid => Ok((vec![0.0, 0.0], vec![1.0, 1.0])),
            MapKind::QMap { .. } => Ok((vec![0.0, -1.0], vec![1.0, 1.0])),
            MapKind::RotSeg => Ok((vec![-2.0, -2.0], vec![2.0, 2.0])),
            MapKind::Interp { a, b } => Ok(bounding_box(a.vertices().iter().chain(b.vertices()))),
            MapKind::BilevelLinear { spec } | MapKind::EpsArgmin { spec, .. } => spec.y_bounds(tol),
            MapKind::GenericAffine { .. } => {
                let imgs = eval_many(self, grid, tol)?;
                Ok(bounding_box(imgs.iter().flat_map(|p| p.vertices())))
            }
        }
    }
}

pub(crate) fn bounding_box<'a>(pts: impl Iterator<Item = &'a Vec<f64>>) -> (Vec<f64>, Vec<f64>) {
    let mut lo: Vec<f64> = Vec::new();
    let mut hi: Vec<f64> = Vec::new();
    for p in pts {
        if lo.is_empty() {
            lo = p.clone();
            hi = p.clone();
        }
        for j in 0..p.len() {
            lo[j] = lo[j].min(p[j]);
            hi[j] = hi[j].max(p[j]);
        }
    }
    (lo, hi)
}

/// `S(x)`.
pub fn eval_map(spec: &MapSpec, x: &[f64], tol: &Tolerances) -> Result<Polytope> {
    if !spec.domain.contains(x) {
        return Err(Error::DomainViolation(x.to_vec()));
    }
    match &spec.kind {
        MapKind::Trapezoid => {
            let t = x[0];
            Polytope::from_vrep(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, t], vec![t.powf(0.25), t]], tol)
        }
        MapKind::QMap { q } => {
            let t = x[0];
            Polytope::from_vrep(&[vec![0.0, -t], vec![1.0, -t], vec![1.0, t.powf(*q)], vec![0.0, 0.0]], tol)
        }
        MapKind::RotSeg => {
            let (s, c) = (PI * x[0]).sin_cos();
            Polytope::from_vrep(&[vec![2.0 * c, 2.0 * s], vec![-2.0 * c, -2.0 * s]], tol)
        }
        MapKind::Interp { a, b } => a.with_tolerances(tol)?.minkowski_interpolate(b, x[0]),
        MapKind::BilevelLinear { spec: b } => bilevel_solution(b, x, spec.exact, tol),
        MapKind::EpsArgmin { spec: b, eps } => eps_argmin(b, *eps, x, spec.exact, tol),
        MapKind::GenericAffine { rows } => {
            let (m, q): (Vec<Vec<f64>>, Vec<f64>) = rows
                .iter()
                .map(|r| {
                    let mut a = r.a.clone();
                    let mut b = r.b;
                    for (i, &xi) in x.iter().enumerate() {
                        if let Some(ax) = r.a_x.get(i) {
                            crate::linalg::axpy(&mut a, xi, ax);
                        }
                        b += xi * r.b_x.get(i).copied().unwrap_or(0.0);
                    }
                    (a, b)
                })
                .unzip();
            Polytope::from_hrep(&m, &q, tol).map_err(|e| match e {
                Error::Infeasible => Error::ParameterInfeasible(x.to_vec()),
                e => e,
            })
        }
    }
}

/// `S(x)` for every grid point, evaluated in parallel, in grid order.
pub fn eval_many(spec: &MapSpec, grid: &[Vec<f64>], tol: &Tolerances) -> Result<Vec<Polytope>> {
    grid.par_iter().map(|x| eval_map(spec, x, tol)).collect()
}

/// Scalar grid as parameter points.
pub fn points(grid: &[f64]) -> Vec<Vec<f64>> {
    grid.iter().map(|&x| vec![x]).collect()
}

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// `count` points log-spaced between `start > 0` and `stop > 0`.
pub fn logspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    let mut g: Vec<f64> = linspace(start.ln(), stop.ln(), count).into_iter().map(f64::exp).collect();
    // pin the endpoints against exp/ln round-off
    if let Some(f) = g.first_mut() {
        *f = start;
    }
    if count > 1 {
        if let Some(l) = g.last_mut() {
            *l = stop;
        }
    }
    g
}

#[cfg(test)]
mod tests;
