//! Sweeps over parameter grids, Lipschitz and calmness estimates, and the
//! bound-verification suites.
//!
//! Lipschitz estimates report both the adjacent-pair maximum (the headline
//! figure) and the all-pairs maximum. Calmness is the supremum of difference
//! quotients at the smallest probed radius, with no extrapolation.

mod body;
mod bounds;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::beliefs::{Belief, ThetaFamily};
use crate::svmaps::{eval_map, Domain, MapSpec};
use crate::{Error, Result, Tolerances};

pub use body::{verify_body_lemmas, BodyCheck, BodyReport};
pub use bounds::{
    bilevel_objective, hausdorff_lip, verify_sandwich_and_h, verify_tv_bound, w1_lipschitz, BilevelReport,
    BilevelRow, LipEstimate, SandwichReport, SandwichRow, TvBoundReport, TvBoundRow, W1LipReport, W1Row,
};

/// `φ` on a grid with finite-difference and ratio statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub grid: Vec<Vec<f64>>,
    pub phi: Vec<f64>,
    /// Standard errors of `phi` (zero on the exact path).
    pub phi_std_error: Vec<f64>,
    /// Central differences; `None` at the two ends.
    pub fd: Vec<Option<f64>>,
    /// `|φ(x_{i+1}) − φ(x_i)| / d(x_i, x_{i+1})`, one per step.
    pub ratios: Vec<f64>,
    /// Largest adjacent ratio.
    pub max_ratio: f64,
    /// Largest ratio over all pairs.
    pub max_ratio_all_pairs: f64,
    /// Full ratio matrix for grids of at most [`PAIRWISE_LIMIT`] points.
    pub pairwise_ratios: Option<Vec<Vec<f64>>>,
    pub bound_margins: Vec<(String, f64)>,
}

pub const PAIRWISE_LIMIT: usize = 200;

/// `φ(x) = E_{β_x}[θ(x, ·)]` over the grid.
pub fn sweep_phi(
    spec: &MapSpec,
    belief: &Belief,
    theta: &ThetaFamily,
    grid: &[Vec<f64>],
    tol: &Tolerances,
) -> Result<SweepReport> {
    if grid.is_empty() {
        return Err(Error::InvalidSpec("empty grid".into()));
    }
    let est = grid
        .par_iter()
        .map(|x| {
            let s = eval_map(spec, x, tol)?;
            belief.expect(&s, &theta.at(x)?, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    let phi: Vec<f64> = est.iter().map(|e| e.value).collect();
    Ok(report_from_values(&spec.domain, grid, phi, est.iter().map(|e| e.std_error).collect()))
}

pub(crate) fn report_from_values(domain: &Domain, grid: &[Vec<f64>], phi: Vec<f64>, se: Vec<f64>) -> SweepReport {
    let n = grid.len();
    let d = |i: usize, j: usize| domain.dist(&grid[i], &grid[j]);
    let fd = (0..n)
        .map(|i| (i > 0 && i + 1 < n).then(|| (phi[i + 1] - phi[i - 1]) / (d(i - 1, i) + d(i, i + 1))))
        .collect();
    let ratios: Vec<f64> = (1..n).map(|i| (phi[i] - phi[i - 1]).abs() / d(i - 1, i)).collect();
    let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
    let pair = |i: usize, j: usize| if i == j { 0.0 } else { (phi[i] - phi[j]).abs() / d(i, j) };
    let max_ratio_all_pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| pair(i, j)).fold(0.0, f64::max);
    let pairwise_ratios = (n <= PAIRWISE_LIMIT).then(|| (0..n).map(|i| (0..n).map(|j| pair(i, j)).collect()).collect());
    SweepReport {
        grid: grid.to_vec(),
        phi,
        phi_std_error: se,
        fd,
        ratios,
        max_ratio,
        max_ratio_all_pairs,
        pairwise_ratios,
        bound_margins: Vec::new(),
    }
}

/// Per-radius suprema of `|f(x') − f(x̄)| / d(x', x̄)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalmnessEstimate {
    pub anchor: Vec<f64>,
    pub radii: Vec<f64>,
    pub sup_ratios: Vec<f64>,
    /// Value at the smallest radius.
    pub extrapolate: f64,
}

/// Offsets probed at each radius `r`: `x̄ ± r t e_j`.
pub const CALMNESS_FRACTIONS: [f64; 5] = [1.0, 0.5, 0.25, 0.125, 0.0625];

/// Calmness of `f` at `anchor`; probe points outside `domain` are skipped.
pub fn calmness_estimate<F>(f: F, domain: &Domain, anchor: &[f64], radii: &[f64]) -> Result<CalmnessEstimate>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if radii.is_empty() || radii.windows(2).any(|w| !(w[1] < w[0])) || radii.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidSpec("radii must be positive and strictly decreasing".into()));
    }
    let f0 = f(anchor)?;
    let sup_ratios = radii
        .par_iter()
        .map(|&r| {
            let mut best = 0.0f64;
            for t in CALMNESS_FRACTIONS {
                for j in 0..anchor.len() {
                    for s in [1.0, -1.0] {
                        let mut xp = anchor.to_vec();
                        xp[j] += s * r * t;
                        if !domain.contains(&xp) {
                            continue;
                        }
                        let d = domain.dist(anchor, &xp);
                        if d > 0.0 {
                            best = best.max((f(&xp)? - f0).abs() / d);
                        }
                    }
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CalmnessEstimate {
        anchor: anchor.to_vec(),
        radii: radii.to_vec(),
        extrapolate: *sup_ratios.last().expect("radii nonempty"),
        sup_ratios,
    })
}

/// Calmness of `φ` at `anchor`.
pub fn phi_calmness(
    spec: &MapSpec,
    belief: &Belief,
    theta: &ThetaFamily,
    anchor: &[f64],
    radii: &[f64],
    tol: &Tolerances,
) -> Result<CalmnessEstimate> {
    let phi = |x: &[f64]| -> Result<f64> {
        let s = eval_map(spec, x, tol)?;
        Ok(belief.expect(&s, &theta.at(x)?, tol)?.value)
    };
    calmness_estimate(phi, &spec.domain, anchor, radii)
}
