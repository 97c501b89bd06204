use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beliefs::{tv_distance, w1_distance, MeasurePair};
use crate::geomkernel::lebesgue_lipschitz_constant;
use crate::linalg::{self, dot};
use crate::svmaps::{bilevel_solution, eval_many, eval_map, h_ratio, rect_decompose, BilevelLinearSpec, MapKind, MapSpec};
use crate::{Error, Result, Tolerances};

/// Slack allowed on the total-variation bound.
pub const TV_BOUND_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvBoundRow {
    pub x: Vec<f64>,
    pub x_next: Vec<f64>,
    /// `d_TV(ι_x, ι_x')`.
    pub lhs: f64,
    /// `2 L_{Y,m} d_H(S(x), S(x')) / λ(S(x))`, the smaller of both orientations.
    pub rhs: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TvBoundReport {
    pub y_lo: Vec<f64>,
    pub y_hi: Vec<f64>,
    pub diam_y: f64,
    pub l_ym: f64,
    pub rows: Vec<TvBoundRow>,
    pub min_margin: f64,
    pub pass: bool,
}

/// Checks `d_TV(ι_x, ι_x') <= 2 L_{Y,m} d_H(S(x), S(x')) / λ(S(x))` on every
/// adjacent grid pair. Every image must be full-dimensional.
pub fn verify_tv_bound(spec: &MapSpec, grid: &[Vec<f64>], tol: &Tolerances) -> Result<TvBoundReport> {
    if grid.len() < 2 {
        return Err(Error::InvalidSpec("grid needs at least two points".into()));
    }
    let imgs = eval_many(spec, grid, tol)?;
    for (x, s) in grid.iter().zip(&imgs) {
        if s.dim() < s.ambient_dim() {
            return Err(Error::DimensionViolation { x: x.clone(), dim: s.dim(), ambient: s.ambient_dim() });
        }
    }
    let (y_lo, y_hi) = spec.outcome_box(grid, tol)?;
    let diam_y = linalg::dist(&y_lo, &y_hi);
    let m = y_lo.len();
    let l_ym = lebesgue_lipschitz_constant(diam_y, m);
    let rows = (1..grid.len())
        .into_par_iter()
        .map(|i| {
            let (a, b) = (&imgs[i - 1], &imgs[i]);
            let lhs = tv_distance(&MeasurePair::new(a.clone(), b.clone())?)?;
            let dh = a.hausdorff(b)?;
            let rhs = (2.0 * l_ym * dh / a.volume()).min(2.0 * l_ym * dh / b.volume());
            Ok(TvBoundRow { x: grid[i - 1].clone(), x_next: grid[i].clone(), lhs, rhs, margin: rhs - lhs })
        })
        .collect::<Result<Vec<_>>>()?;
    let min_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    Ok(TvBoundReport { y_lo, y_hi, diam_y, l_ym, pass: min_margin >= -TV_BOUND_SLACK, rows, min_margin })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichRow {
    pub x: Vec<f64>,
    pub inner_violation: f64,
    pub outer_violation: f64,
    pub holds: bool,
    /// `None` when a denominator vanishes.
    pub h: Option<f64>,
    /// Closed form where one is known (q-map anchored at 0: `1 + x^{q−1}`).
    pub h_closed: Option<f64>,
    /// `|h(x_i) − h(x_{i−1})| / d(x_i, x_{i−1})`, from the second row on.
    pub h_ratio_step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub anchor: Vec<f64>,
    pub rows: Vec<SandwichRow>,
    pub max_h_ratio: f64,
    pub pass: bool,
}

/// Sandwich inclusions and the ratio `h` of the rectangular decomposition at
/// every grid point.
pub fn verify_sandwich_and_h(spec: &MapSpec, anchor: &[f64], grid: &[Vec<f64>], tol: &Tolerances) -> Result<SandwichReport> {
    let mut rows = grid
        .par_iter()
        .map(|x| {
            let d = rect_decompose(spec, anchor, x, tol)?;
            let check = d.check_sandwich(&eval_map(spec, x, tol)?)?;
            let h = match h_ratio(&d) {
                Ok(v) => Some(v),
                Err(Error::ZeroDenominator) => None,
                Err(e) => return Err(e),
            };
            let h_closed = match spec.kind {
                MapKind::QMap { q } if anchor[0] == 0.0 && x[0] > 0.0 => Some(1.0 + x[0].powf(q - 1.0)),
                _ => None,
            };
            Ok(SandwichRow {
                x: x.clone(),
                inner_violation: check.inner_violation,
                outer_violation: check.outer_violation,
                holds: check.holds,
                h,
                h_closed,
                h_ratio_step: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    for i in 1..rows.len() {
        if let (Some(a), Some(b)) = (rows[i - 1].h, rows[i].h) {
            rows[i].h_ratio_step = Some((b - a).abs() / spec.dist(&grid[i - 1], &grid[i]));
        }
    }
    let max_h_ratio = rows.iter().filter_map(|r| r.h_ratio_step).fold(0.0, f64::max);
    let closed_ok = rows.iter().all(|r| match (r.h, r.h_closed) {
        (Some(h), Some(c)) => (h - c).abs() <= 1e-9 * c.abs().max(1.0),
        _ => true,
    });
    let pass = closed_ok && rows.iter().all(|r| r.holds);
    Ok(SandwichReport { anchor: anchor.to_vec(), rows, max_h_ratio, pass })
}

/// Estimates of `sup d_H(S(x), S(x')) / d(x, x')`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipEstimate {
    pub adjacent: f64,
    pub all_pairs: Option<f64>,
}

/// Hausdorff–Lipschitz estimate in the metric of the domain; the all-pairs
/// maximum is computed when `all_pairs` is set.
pub fn hausdorff_lip(spec: &MapSpec, grid: &[Vec<f64>], all_pairs: bool, tol: &Tolerances) -> Result<LipEstimate> {
    if grid.len() < 2 {
        return Err(Error::InvalidSpec("grid needs at least two points".into()));
    }
    let imgs = eval_many(spec, grid, tol)?;
    let ratio = |i: usize, j: usize| -> Result<f64> {
        let d = spec.dist(&grid[i], &grid[j]);
        if d == 0.0 {
            return Ok(0.0);
        }
        Ok(imgs[i].hausdorff(&imgs[j])? / d)
    };
    let adjacent = (1..grid.len())
        .into_par_iter()
        .map(|i| ratio(i - 1, i))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let all_pairs = if all_pairs {
        let n = grid.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let v = pairs.par_iter().map(|&(i, j)| ratio(i, j)).collect::<Result<Vec<_>>>()?;
        Some(v.into_iter().fold(0.0, f64::max))
    } else {
        None
    };
    Ok(LipEstimate { adjacent, all_pairs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct W1Row {
    pub x: Vec<f64>,
    pub x_other: Vec<f64>,
    pub w1: f64,
    pub error_bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct W1LipReport {
    /// All pairs `i < j`.
    pub rows: Vec<W1Row>,
    pub max_adjacent: f64,
    pub max_all_pairs: f64,
    pub min_all_pairs: f64,
}

/// Pairwise `W1(ι_x, ι_x') / d(x, x')` on the grid.
pub fn w1_lipschitz(spec: &MapSpec, grid: &[Vec<f64>], resolution: f64, tol: &Tolerances) -> Result<W1LipReport> {
    if grid.len() < 2 {
        return Err(Error::InvalidSpec("grid needs at least two points".into()));
    }
    let imgs = eval_many(spec, grid, tol)?;
    let n = grid.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let rows = pairs
        .par_iter()
        .map(|&(i, j)| {
            let w = w1_distance(&MeasurePair::new(imgs[i].clone(), imgs[j].clone())?, resolution)?;
            let d = spec.dist(&grid[i], &grid[j]);
            Ok(W1Row { x: grid[i].clone(), x_other: grid[j].clone(), w1: w.value, error_bound: w.error_bound, ratio: w.value / d })
        })
        .collect::<Result<Vec<_>>>()?;
    let adjacent = rows.iter().zip(&pairs).filter(|(_, p)| p.1 == p.0 + 1).map(|(r, _)| r.ratio);
    let max_adjacent = adjacent.fold(0.0, f64::max);
    let max_all_pairs = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let min_all_pairs = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    Ok(W1LipReport { rows, max_adjacent, max_all_pairs, min_all_pairs })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilevelRow {
    pub x: Vec<f64>,
    /// `g·x + E_{β_x}[h·y]`; `None` when `x` is infeasible.
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilevelReport {
    pub rows: Vec<BilevelRow>,
    pub argmin: Vec<f64>,
    pub min_value: f64,
    /// Adjacent-pair Lipschitz estimate over feasible consecutive points.
    pub lipschitz: f64,
    pub skipped: Vec<Vec<f64>>,
}

/// Leader objective `g·x + E[h·y]` under the neutral belief on the lower-level
/// solution set, evaluated on the grid.
pub fn bilevel_objective(
    spec: &BilevelLinearSpec,
    g: &[f64],
    h: &[f64],
    grid: &[Vec<f64>],
    exact: bool,
    tol: &Tolerances,
) -> Result<BilevelReport> {
    if grid.is_empty() {
        return Err(Error::InvalidSpec("empty grid".into()));
    }
    if g.len() != spec.n() || h.len() != spec.m() {
        return Err(Error::DimensionMismatch { expected: spec.n() + spec.m(), got: g.len() + h.len() });
    }
    let rows = grid
        .par_iter()
        .map(|x| match bilevel_solution(spec, x, exact, tol) {
            // E[h·y] is h·centroid for the uniform law
            Ok(s) => Ok(BilevelRow { x: x.clone(), value: Some(dot(g, x) + dot(h, &s.centroid())) }),
            Err(Error::ParameterInfeasible(_)) => Ok(BilevelRow { x: x.clone(), value: None }),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<_>>>()?;
    let skipped: Vec<Vec<f64>> = rows.iter().filter(|r| r.value.is_none()).map(|r| r.x.clone()).collect();
    let (argmin, min_value) = rows
        .iter()
        .filter_map(|r| r.value.map(|v| (&r.x, v)))
        .fold((None, f64::INFINITY), |acc, (x, v)| if v < acc.1 { (Some(x.clone()), v) } else { acc });
    let argmin = argmin.ok_or_else(|| Error::ParameterInfeasible(grid[0].clone()))?;
    let lipschitz = rows
        .windows(2)
        .filter_map(|w| match (w[0].value, w[1].value) {
            (Some(a), Some(b)) => Some((a - b).abs() / linalg::dist(&w[0].x, &w[1].x)),
            _ => None,
        })
        .fold(0.0, f64::max);
    Ok(BilevelReport { rows, argmin, min_value, lipschitz, skipped })
}

