use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geomkernel::Polytope;
use crate::linalg::{self, dot};
use crate::{Error, Result, Tolerances};

use super::{eval_map, eval_many, MapSpec};

/// `x ↦ s(S(x))` on the grid; each point certified in `ri S(x)`.
pub fn steiner_selection(spec: &MapSpec, grid: &[Vec<f64>], tol: &Tolerances) -> Result<Vec<Vec<f64>>> {
    eval_many(spec, grid, tol)?.par_iter().map(Polytope::steiner_point).collect()
}

/// Intrinsic dimension of `S(x)` on the grid.
pub fn dim_profile(spec: &MapSpec, grid: &[Vec<f64>], tol: &Tolerances) -> Result<Vec<usize>> {
    Ok(eval_many(spec, grid, tol)?.iter().map(Polytope::dim).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LipschitzSelection {
    pub points: Vec<Vec<f64>>,
    /// Ratio of circumradius to inradius of the ball-approximating polytope.
    pub slack: f64,
    /// `‖τ(x̄) − ȳ‖`.
    pub anchor_error: f64,
}

/// Selection through `(x̄, ȳ)`: the Steiner point of
/// `S(x) ∩ Ball(ȳ, 2 d(ȳ, S(x)))`, the ball replaced by a circumscribed
/// polytope with `ball_facets` facets.
pub fn lipschitz_selection(
    spec: &MapSpec,
    anchor: &[f64],
    ybar: &[f64],
    grid: &[Vec<f64>],
    ball_facets: usize,
    tol: &Tolerances,
) -> Result<LipschitzSelection> {
    if ball_facets < 8 {
        return Err(Error::InvalidSpec(format!("ball_facets must be at least 8, got {ball_facets}")));
    }
    let sbar = eval_map(spec, anchor, tol)?;
    let (d, _) = sbar.dist_point(ybar)?;
    if d > tol.feas_tol {
        return Err(Error::InvalidSpec(format!("anchor outcome lies at distance {d} from S(x̄)")));
    }
    let ball = BallFacets::new(ybar.len(), ball_facets);
    let points = eval_many(spec, grid, tol)?
        .par_iter()
        .map(|s| select_through(s, ybar, &ball))
        .collect::<Result<Vec<_>>>()?;
    let tau_bar = select_through(&sbar, ybar, &ball)?;
    Ok(LipschitzSelection { points, slack: ball.slack, anchor_error: linalg::dist(&tau_bar, ybar) })
}

/// Unit normals of a polytope circumscribing the unit ball.
struct BallFacets {
    normals: Vec<Vec<f64>>,
    slack: f64,
}

impl BallFacets {
    fn new(m: usize, n: usize) -> Self {
        if m == 2 {
            let normals = (0..n).map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                vec![t.cos(), t.sin()]
            });
            return Self { normals: normals.collect(), slack: 1.0 / (PI / n as f64).cos() };
        }
        let mut normals: Vec<Vec<f64>> = Vec::new();
        for i in 0..m {
            for s in [1.0, -1.0] {
                let mut e = vec![0.0; m];
                e[i] = s;
                normals.push(e);
            }
        }
        if m > 2 {
            normals.extend(crate::geomkernel::sphere_nodes(m, n.saturating_sub(2 * m)));
        }
        // circumradius over inradius, estimated on a finer node set
        let worst = crate::geomkernel::sphere_nodes(m.max(1), 4096)
            .iter()
            .filter(|u| u.len() == m)
            .map(|u| normals.iter().map(|a| dot(a, u)).fold(f64::NEG_INFINITY, f64::max))
            .fold(f64::INFINITY, f64::min);
        let slack = if m == 1 { 1.0 } else { 1.0 / worst };
        Self { normals, slack }
    }
}

fn select_through(s: &Polytope, ybar: &[f64], ball: &BallFacets) -> Result<Vec<f64>> {
    let (d, p) = s.dist_point(ybar)?;
    if d <= s.tolerances().feas_tol {
        return Ok(p);
    }
    let r = 2.0 * d;
    let mut rows = s.hrep().normals.clone();
    let mut rhs = s.hrep().offsets.clone();
    for a in &ball.normals {
        rows.push(a.clone());
        rhs.push(r + dot(a, ybar));
    }
    // nonempty: the ball reaches the projection of ȳ
    let cut = Polytope::from_rows_unchecked(&rows, &rhs, s.tolerances())?.ok_or(Error::Infeasible)?;
    cut.steiner_point()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameSelection {
    /// Steiner point of `S(x̄)`; images are translated by `−origin`.
    pub origin: Vec<f64>,
    /// `1 + 1/r(S(x̄) − origin)`.
    pub kappa: f64,
    /// One orthonormal basis of `R^m` per grid point (list of columns); the
    /// first `k` columns span the direction space of `S(x)`.
    pub frames: Vec<Vec<Vec<f64>>>,
    /// `max_i ‖b_i(x_{j+1}) − b_i(x_j)‖ / d(x_j, x_{j+1})` per grid step.
    pub increments: Vec<f64>,
}

/// Locally Lipschitz orthonormal frames adapted to `aff S(x)` around `x̄`.
///
/// Images are translated by the Steiner point of `S(x̄)` and scaled by
/// `κ = 1 + 1/r(S(x̄))` so that unit vectors of the anchor direction space lie
/// in the image; each is then tracked by [`lipschitz_selection`] and the
/// family is completed by constant vectors and orthonormalised.
pub fn frame_selection(
    spec: &MapSpec,
    anchor: &[f64],
    grid: &[Vec<f64>],
    ball_facets: usize,
    tol: &Tolerances,
) -> Result<FrameSelection> {
    let sbar = eval_map(spec, anchor, tol)?;
    let k = sbar.dim();
    let m = sbar.ambient_dim();
    let origin = sbar.steiner_point()?;
    let neg = linalg::scale(&origin, -1.0);
    let r = sbar.translate(&neg)?.inner_radius()?;
    let kappa = if r.is_finite() { 1.0 + 1.0 / r } else { 1.0 };
    let ybars: Vec<Vec<f64>> = sbar.frame().basis.iter().cloned().chain(sbar.frame().complement()).collect();
    let ball = BallFacets::new(m, ball_facets);

    let frames = eval_many(spec, grid, tol)?
        .par_iter()
        .map(|s| {
            if s.dim() != k {
                return Err(Error::DimensionDrift { from: k, to: s.dim() });
            }
            let t = s.translate(&neg)?.scale(kappa)?;
            let mut u = Vec::with_capacity(m);
            for (i, yb) in ybars.iter().enumerate() {
                u.push(if i < k { select_through(&t, yb, &ball)? } else { yb.clone() });
            }
            gram_schmidt(u)
        })
        .collect::<Result<Vec<_>>>()?;

    let increments = frames
        .windows(2)
        .zip(grid.windows(2))
        .map(|(f, x)| {
            let step = f[0].iter().zip(&f[1]).map(|(a, b)| linalg::dist(a, b)).fold(0.0, f64::max);
            step / spec.dist(&x[0], &x[1])
        })
        .collect();
    Ok(FrameSelection { origin, kappa, frames, increments })
}

fn gram_schmidt(u: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::with_capacity(u.len());
    for v in u {
        let mut w = v.clone();
        for b in &out {
            let c = dot(&v, b);
            linalg::axpy(&mut w, -c, b);
        }
        let n = linalg::norm(&w);
        if n < 1e-12 {
            return Err(Error::ZeroDenominator);
        }
        out.push(linalg::scale(&w, 1.0 / n));
    }
    Ok(out)
}
