use serde::{Deserialize, Serialize};

use crate::geomkernel::Polytope;
use crate::linalg;
use crate::{Error, Result};

use super::transport::transport;

/// Two supports whose uniform laws are compared.
#[derive(Debug, Clone)]
pub struct MeasurePair {
    pub p: Polytope,
    pub q: Polytope,
    /// Whether both affine hulls coincide.
    pub common_hull: bool,
}

impl MeasurePair {
    pub fn new(p: Polytope, q: Polytope) -> Result<Self> {
        if p.ambient_dim() != q.ambient_dim() {
            return Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: q.ambient_dim() });
        }
        let common_hull = p.same_affine_hull(&q);
        Ok(Self { p, q, common_hull })
    }
}

/// Un-halved total variation between the uniform laws; 2 when the affine
/// hulls differ.
pub fn tv_distance(pair: &MeasurePair) -> Result<f64> {
    if !pair.common_hull {
        return Ok(2.0);
    }
    let k = pair.p.dim();
    if k == 0 {
        return Ok(0.0);
    }
    let (lp, lq) = (pair.p.volume(), pair.q.volume());
    let inter = pair.p.intersect(&pair.q)?.map_or(0.0, |i| i.measure_in_dim(k));
    let inter = inter.min(lp).min(lq);
    Ok(((lp - inter) / lp + (lq - inter) / lq + inter * (1.0 / lp - 1.0 / lq).abs()).clamp(0.0, 2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct W1Estimate {
    pub value: f64,
    /// Bound on `|value − W1|`; zero on the exact path.
    pub error_bound: f64,
}

/// Wasserstein-1 distance between the uniform laws.
///
/// Exact by the quantile formula when both supports lie on one line (always
/// the case in ambient dimension 1). Otherwise both laws are pushed onto an
/// axis-aligned grid of side `resolution` over the joint bounding box and the
/// discrete transport problem is solved; the error bound is twice the cell
/// diameter.
pub fn w1_distance(pair: &MeasurePair, resolution: f64) -> Result<W1Estimate> {
    if !(resolution > 0.0) {
        return Err(Error::InvalidSpec("resolution must be positive".into()));
    }
    let mut all: Vec<Vec<f64>> = pair.p.vertices().to_vec();
    all.extend(pair.q.vertices().iter().cloned());
    let union = Polytope::from_vrep(&all, pair.p.tolerances())?;
    if union.dim() <= 1 {
        return Ok(W1Estimate { value: collinear_w1(&pair.p, &pair.q, &union), error_bound: 0.0 });
    }
    grid_w1(pair, resolution)
}

fn collinear_w1(p: &Polytope, q: &Polytope, union: &Polytope) -> f64 {
    if union.dim() == 0 {
        return 0.0;
    }
    let interval = |s: &Polytope| {
        let t: Vec<f64> = s.vertices().iter().map(|v| union.frame().to_local(v)[0]).collect();
        (t.iter().copied().fold(f64::INFINITY, f64::min), t.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    };
    let (a, b) = interval(p);
    let (c, d) = interval(q);
    // ∫_0^1 |F⁻¹(t) − G⁻¹(t)| dt with linear quantile functions
    let alpha = a - c;
    let beta = (b - a) - (d - c);
    if beta == 0.0 {
        return alpha.abs();
    }
    let root = -alpha / beta;
    if root > 0.0 && root < 1.0 {
        (alpha * alpha + (alpha + beta).powi(2)) / (2.0 * beta.abs())
    } else {
        (alpha + beta / 2.0).abs()
    }
}

/// Mass and barycentre of `P ∩ cell` for each grid cell meeting `P`.
fn discretise(p: &Polytope, lo: &[f64], h: f64, counts: &[usize]) -> Result<Vec<(Vec<usize>, f64, Vec<f64>)>> {
    let m = lo.len();
    let k = p.dim();
    let range: Vec<(usize, usize)> = (0..m)
        .map(|j| {
            let pl = p.vertices().iter().map(|v| v[j]).fold(f64::INFINITY, f64::min);
            let ph = p.vertices().iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max);
            let a = (((pl - lo[j]) / h).floor().max(0.0) as usize).min(counts[j] - 1);
            let b = (((ph - lo[j]) / h).floor().max(0.0) as usize).min(counts[j] - 1);
            (a, b)
        })
        .collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = range.iter().map(|r| r.0).collect();
    loop {
        let mut rows = p.hrep().normals.clone();
        let mut rhs = p.hrep().offsets.clone();
        for j in 0..m {
            let mut e = vec![0.0; m];
            e[j] = 1.0;
            rows.push(e.clone());
            rhs.push(lo[j] + (idx[j] + 1) as f64 * h);
            rows.push(linalg::scale(&e, -1.0));
            rhs.push(-(lo[j] + idx[j] as f64 * h));
        }
        // rank ambiguity only arises for slivers of negligible measure
        match Polytope::from_rows_unchecked(&rows, &rhs, p.tolerances()) {
            Ok(Some(c)) if c.dim() == k => {
                let mass = if k == 0 { 1.0 } else { c.volume() };
                if mass > 0.0 {
                    out.push((idx.clone(), mass, c.centroid()));
                }
            }
            Ok(_) | Err(Error::NumericalRankAmbiguity { .. }) => {}
            Err(e) => return Err(e),
        }
        let mut j = 0;
        loop {
            if j == m {
                return Ok(out);
            }
            if idx[j] < range[j].1 {
                idx[j] += 1;
                break;
            }
            idx[j] = range[j].0;
            j += 1;
        }
    }
}

fn grid_w1(pair: &MeasurePair, h: f64) -> Result<W1Estimate> {
    let m = pair.p.ambient_dim();
    let verts = pair.p.vertices().iter().chain(pair.q.vertices());
    let mut lo = vec![f64::INFINITY; m];
    let mut hi = vec![f64::NEG_INFINITY; m];
    for v in verts {
        for j in 0..m {
            lo[j] = lo[j].min(v[j]);
            hi[j] = hi[j].max(v[j]);
        }
    }
    let counts: Vec<usize> = (0..m).map(|j| (((hi[j] - lo[j]) / h).ceil() as usize).max(1)).collect();
    let a = discretise(&pair.p, &lo, h, &counts)?;
    let b = discretise(&pair.q, &lo, h, &counts)?;
    let mut cells: Vec<&Vec<usize>> = a.iter().chain(&b).map(|c| &c.0).collect();
    cells.sort();
    cells.dedup();
    if cells.len() < 8 {
        return Err(Error::ResolutionTooCoarse { cells: cells.len() });
    }
    let cost: Vec<Vec<f64>> = a.iter().map(|(_, _, x)| b.iter().map(|(_, _, y)| linalg::dist(x, y)).collect()).collect();
    let supply: Vec<f64> = a.iter().map(|c| c.1).collect();
    let demand: Vec<f64> = b.iter().map(|c| c.1).collect();
    let value = transport(&supply, &demand, &cost)?;
    Ok(W1Estimate { value, error_bound: 2.0 * h * (m as f64).sqrt() })
}

/// Both sides of `d_W1 <= ½ diam(Y) d_TV`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct W1TvReport {
    pub w1: f64,
    pub w1_error: f64,
    pub tv: f64,
    pub y_diam: f64,
    pub rhs: f64,
    /// `rhs − w1`.
    pub margin: f64,
    pub pass: bool,
}

pub fn w1_tv_inequality_check(pair: &MeasurePair, y_diam: f64, resolution: f64) -> Result<W1TvReport> {
    let w = w1_distance(pair, resolution)?;
    let tv = tv_distance(pair)?;
    let rhs = 0.5 * y_diam * tv;
    let margin = rhs - w.value;
    let slack = w.error_bound + 1e-9 * (1.0 + rhs);
    Ok(W1TvReport { w1: w.value, w1_error: w.error_bound, tv, y_diam, rhs, margin, pass: margin >= -slack })
}

