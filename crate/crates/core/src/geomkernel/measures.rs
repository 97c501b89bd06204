use crate::linalg::{self, dot};
use crate::{Error, Result};

use super::Polytope;

/// Jung's bound on the circumradius of a set of diameter `diam` in `R^m`.
pub fn jung_radius_bound(diam: f64, m: usize) -> f64 {
    let m = m as f64;
    diam * (m / (2.0 * (m + 1.0))).sqrt()
}

impl Polytope {
    /// Support function `σ_P(u) = max_{v ∈ P} ⟨u, v⟩`.
    pub fn support(&self, u: &[f64]) -> f64 {
        self.vertices.iter().map(|v| dot(u, v)).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Radial function `sup{t >= 0 : t·u ∈ P}`; requires `0 ∈ P`.
    pub fn radial(&self, u: &[f64]) -> Result<f64> {
        let zero = vec![0.0; self.ambient_dim()];
        if !self.contains(&zero, self.tol.feas_tol) {
            return Err(Error::OriginNotContained);
        }
        let un = linalg::norm(u);
        let mut t = f64::INFINITY;
        for (a, b) in self.hrep.normals.iter().zip(&self.hrep.offsets) {
            let au = dot(a, u);
            if au > self.tol.feas_tol * un {
                t = t.min(b.max(0.0) / au);
            }
        }
        Ok(t)
    }

    /// Inner radius: distance from the origin to the relative boundary,
    /// requiring `0 ∈ ri(P)`. A singleton `{0}` has infinite inner radius
    /// (the infimum over an empty direction set).
    pub fn inner_radius(&self) -> Result<f64> {
        let zero = vec![0.0; self.ambient_dim()];
        if !self.in_relative_interior(&zero) {
            return Err(Error::OriginNotRelativeInterior);
        }
        let t0 = self.frame.to_local(&zero);
        let r = self
            .facets
            .iter()
            .map(|f| f.offset - dot(&f.normal, &t0))
            .fold(f64::INFINITY, f64::min);
        if r <= self.tol.feas_tol {
            return Err(Error::OriginNotRelativeInterior);
        }
        Ok(r)
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d = 0.0f64;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(linalg::dist(&v[i], &v[j]));
            }
        }
        d
    }

    /// Smallest ball containing the polytope: Welzl's algorithm for ambient
    /// dimension at most 3, Bădoiu–Clarkson iterations above.
    pub fn enclosing_ball(&self) -> (Vec<f64>, f64) {
        let pts = &self.vertices;
        let m = self.ambient_dim();
        if m <= 3 {
            let mut boundary = Vec::new();
            let (c, r2) = welzl(pts, pts.len(), &mut boundary, m);
            // report the certified radius (max distance to the centre)
            let r = pts.iter().map(|p| linalg::dist(p, &c)).fold(0.0, f64::max);
            debug_assert!(r * r <= r2 * (1.0 + 1e-9) + 1e-18);
            (c, r)
        } else {
            badoiu_clarkson(pts)
        }
    }
}

type Ball = (Vec<f64>, f64);

fn welzl(pts: &[Vec<f64>], n: usize, boundary: &mut Vec<Vec<f64>>, m: usize) -> Ball {
    if n == 0 || boundary.len() == m + 1 {
        return ball_through(boundary, m);
    }
    let p = &pts[n - 1];
    let ball = welzl(pts, n - 1, boundary, m);
    if ball.1 >= 0.0 && sq_dist(p, &ball.0) <= ball.1 * (1.0 + 1e-12) + 1e-20 {
        return ball;
    }
    boundary.push(p.clone());
    let ball = welzl(pts, n - 1, boundary, m);
    boundary.pop();
    ball
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Smallest ball with all of `r` on its boundary (centre in `aff(r)`),
/// returned as (centre, squared radius); squared radius −1 for the empty set.
fn ball_through(r: &[Vec<f64>], m: usize) -> Ball {
    match r.len() {
        0 => (vec![0.0; m], -1.0),
        1 => (r[0].clone(), 0.0),
        _ => {
            let r0 = &r[0];
            let d: Vec<Vec<f64>> = r[1..].iter().map(|p| linalg::sub(p, r0)).collect();
            let g: Vec<Vec<f64>> = d.iter().map(|a| d.iter().map(|b| 2.0 * dot(a, b)).collect()).collect();
            let rhs: Vec<f64> = d.iter().map(|a| dot(a, a)).collect();
            match linalg::solve(&g, &rhs) {
                Some(lam) if lam.iter().all(|v| v.is_finite()) => {
                    let mut c = r0.clone();
                    for (l, di) in lam.iter().zip(&d) {
                        linalg::axpy(&mut c, *l, di);
                    }
                    let r2 = sq_dist(&c, r0);
                    (c, r2)
                }
                _ => {
                    // affinely dependent boundary: use the farthest pair
                    let mut best = (0, 0, -1.0);
                    for i in 0..r.len() {
                        for j in i + 1..r.len() {
                            let s = sq_dist(&r[i], &r[j]);
                            if s > best.2 {
                                best = (i, j, s);
                            }
                        }
                    }
                    let c = linalg::scale(&linalg::add(&r[best.0], &r[best.1]), 0.5);
                    (c, best.2 / 4.0)
                }
            }
        }
    }
}

fn badoiu_clarkson(pts: &[Vec<f64>]) -> Ball {
    let mut c = pts[0].clone();
    for i in 1..=20_000usize {
        let far = pts
            .iter()
            .max_by(|a, b| sq_dist(a, &c).total_cmp(&sq_dist(b, &c)))
            .expect("nonempty vertex set");
        let step = 1.0 / (i as f64 + 1.0);
        let delta = linalg::sub(far, &c);
        linalg::axpy(&mut c, step, &delta);
    }
    let r = pts.iter().map(|p| linalg::dist(p, &c)).fold(0.0, f64::max);
    (c, r)
}
