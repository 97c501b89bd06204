use serde::{Deserialize, Serialize};

use crate::geomkernel::{AffineFrame, Polytope};
use crate::linalg::{self, dot};
use crate::{Error, Result, Tolerances};

use super::{eval_map, MapKind, MapSpec};

/// Inner and outer product approximations
/// `T0 ⊕ R0 ⊆ S(x) − s ⊆ T1 ⊕ R1`, with `s` the Steiner point of `S(x̄)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RectDecomposition {
    pub anchor: Vec<f64>,
    pub x: Vec<f64>,
    /// Translation `s` applied to every image.
    pub shift: Vec<f64>,
    /// `None` when the intersection defining `T0` is empty.
    pub t0: Option<Polytope>,
    pub t1: Polytope,
    pub r0: Polytope,
    pub r1: Polytope,
    pub dim_anchor: usize,
    pub dim_x: usize,
}

/// Worst violations of the two inclusions (nonpositive when they hold).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichCheck {
    pub inner_violation: f64,
    pub outer_violation: f64,
    pub holds: bool,
}

/// Tangential/orthogonal split of `S(x)` relative to the anchor `x̄`.
///
/// `F` is the direction space of `S(x̄)`; `T1` and `R` are the projections of
/// `S(x) − s` onto `F` and `F^⊥`, `R0 = R1 = R`, and
/// `T0 = ⋂_{z ∈ ext R} (S(x) − s − z)`. For the q-map anchored at 0 the
/// construction above collapses `T0` to a point, so the explicit split
/// `T = [0,1]`, `R0 = [−x, 0]`, `R1 = [−x, x^q]` is used instead.
pub fn rect_decompose(spec: &MapSpec, anchor: &[f64], x: &[f64], tol: &Tolerances) -> Result<RectDecomposition> {
    let sbar = eval_map(spec, anchor, tol)?;
    let s = eval_map(spec, x, tol)?;
    let shift = sbar.steiner_point()?;
    let m = s.ambient_dim();
    if let MapKind::QMap { q } = spec.kind {
        if anchor[0] == 0.0 && x[0] > 0.0 {
            let t = x[0];
            let seg = |a: [f64; 2], b: [f64; 2]| Polytope::from_vrep(&[a.to_vec(), b.to_vec()], tol);
            let t1 = seg([-shift[0], -shift[1]], [1.0 - shift[0], -shift[1]])?;
            return Ok(RectDecomposition {
                anchor: anchor.to_vec(),
                x: x.to_vec(),
                t0: Some(t1.clone()),
                t1,
                r0: seg([0.0, -t], [0.0, 0.0])?,
                r1: seg([0.0, -t], [0.0, t.powf(q)])?,
                shift,
                dim_anchor: sbar.dim(),
                dim_x: s.dim(),
            });
        }
    }
    let moved = s.translate(&linalg::scale(&shift, -1.0))?;
    let f = AffineFrame::linear(m, sbar.frame().basis.clone());
    let g = AffineFrame::linear(m, sbar.frame().complement());
    let t1 = moved.project(&f)?;
    let r = moved.project(&g)?;
    let mut t0 = Some(moved.clone());
    for z in r.vertices() {
        let piece = moved.translate(&linalg::scale(z, -1.0))?;
        t0 = match t0 {
            Some(acc) => acc.intersect(&piece)?,
            None => None,
        };
    }
    Ok(RectDecomposition {
        anchor: anchor.to_vec(),
        x: x.to_vec(),
        shift,
        t0,
        t1,
        r0: r.clone(),
        r1: r,
        dim_anchor: sbar.dim(),
        dim_x: s.dim(),
    })
}

impl RectDecomposition {
    /// Checks `T0 ⊕ R0 ⊆ S(x) − s ⊆ T1 ⊕ R1` by vertex membership, where `s_x`
    /// is the untranslated image `S(x)`.
    pub fn check_sandwich(&self, s_x: &Polytope) -> Result<SandwichCheck> {
        let tol = s_x.tolerances().feas_tol;
        let moved = s_x.translate(&linalg::scale(&self.shift, -1.0))?;
        let inner_violation = match &self.t0 {
            Some(t0) => max_violation(&moved, t0.minkowski_sum(&self.r0)?.vertices()),
            None => f64::NEG_INFINITY,
        };
        let outer = self.t1.minkowski_sum(&self.r1)?;
        let outer_violation = max_violation(&outer, moved.vertices());
        Ok(SandwichCheck {
            inner_violation,
            outer_violation,
            holds: inner_violation <= tol && outer_violation <= tol,
        })
    }
}

fn max_violation(p: &Polytope, pts: &[Vec<f64>]) -> f64 {
    let h = p.hrep();
    pts.iter()
        .flat_map(|y| h.normals.iter().zip(&h.offsets).map(move |(a, b)| dot(a, y) - b))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `λ(R1) λ(T1) / (λ(R0) λ(T0))`, with `R` measured in dimension
/// `dim S(x) − dim S(x̄)` and `T` in `dim S(x̄)`; 1 at the anchor.
pub fn h_ratio(d: &RectDecomposition) -> Result<f64> {
    if d.x == d.anchor {
        return Ok(1.0);
    }
    let j = d.dim_x.saturating_sub(d.dim_anchor);
    let k = d.dim_anchor;
    let t0 = d.t0.as_ref().ok_or(Error::ZeroDenominator)?;
    let den = d.r0.measure_in_dim(j) * t0.measure_in_dim(k);
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::ZeroDenominator);
    }
    Ok(d.r1.measure_in_dim(j) * d.t1.measure_in_dim(k) / den)
}
