//! Steiner point `s(A) = λ(B)^{-1} ∫_{S^{m-1}} u σ_A(u) du`.

use std::f64::consts::PI;

use crate::linalg::{self, dot};
use crate::{Error, Result};

use super::Polytope;

impl Polytope {
    /// Steiner point (curvature centroid). Exact in the plane; otherwise a
    /// deterministic sphere quadrature with `sphere_nodes` nodes.
    pub fn steiner_point(&self) -> Result<Vec<f64>> {
        let m = self.ambient_dim();
        let s = match (self.vertices.len(), m) {
            (1, _) => self.vertices[0].clone(),
            (_, 1) => {
                let lo = self.vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
                let hi = self.vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
                vec![0.5 * (lo + hi)]
            }
            (_, 2) => planar_steiner(&self.vertices),
            _ => sphere_steiner(&self.vertices, self.tol.sphere_nodes),
        };
        if !self.in_relative_interior(&s) {
            return Err(Error::QuadratureBudgetExceeded { nodes: self.tol.sphere_nodes });
        }
        Ok(s)
    }
}

/// Arc-wise exact integration: between consecutive breakpoints the support
/// function is `⟨u, v⟩` for a fixed vertex `v`, so the integral reduces to
/// closed-form trigonometric moments.
fn planar_steiner(vertices: &[Vec<f64>]) -> Vec<f64> {
    let mut angles: Vec<f64> = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let d = linalg::sub(&vertices[i], &vertices[j]);
            let phi = d[1].atan2(d[0]);
            for a in [phi + PI / 2.0, phi - PI / 2.0] {
                angles.push(a.rem_euclid(2.0 * PI));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    if angles.is_empty() {
        angles.push(0.0);
    }
    let n = angles.len();
    let mut s = [0.0f64; 2];
    for k in 0..n {
        let a = angles[k];
        let b = if k + 1 < n { angles[k + 1] } else { angles[0] + 2.0 * PI };
        if b - a <= 0.0 {
            continue;
        }
        let mid = 0.5 * (a + b);
        let u = [mid.cos(), mid.sin()];
        let v = vertices
            .iter()
            .max_by(|p, q| dot(&u, p).total_cmp(&dot(&u, q)))
            .expect("nonempty");
        let s2 = ((2.0 * b).sin() - (2.0 * a).sin()) / 4.0;
        let icc = (b - a) / 2.0 + s2;
        let iss = (b - a) / 2.0 - s2;
        let ics = (b.sin().powi(2) - a.sin().powi(2)) / 2.0;
        s[0] += icc * v[0] + ics * v[1];
        s[1] += ics * v[0] + iss * v[1];
    }
    vec![s[0] / PI, s[1] / PI]
}

/// External-angle form of the Steiner point: each vertex weighted by the
/// fraction of sphere nodes whose support is attained there.
fn sphere_steiner(vertices: &[Vec<f64>], nodes: usize) -> Vec<f64> {
    let m = vertices[0].len();
    let mut counts = vec![0usize; vertices.len()];
    for u in sphere_nodes(m, nodes) {
        let (best, _) = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (i, dot(&u, v)))
            .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
        counts[best] += 1;
    }
    let mut s = vec![0.0; m];
    for (v, c) in vertices.iter().zip(&counts) {
        linalg::axpy(&mut s, *c as f64 / nodes as f64, v);
    }
    s
}

/// Deterministic near-uniform points on `S^{m-1}`: the spherical Fibonacci
/// lattice for `m = 3`, Halton points pushed through Box–Muller otherwise.
pub(crate) fn sphere_nodes(m: usize, n: usize) -> Vec<Vec<f64>> {
    if m == 2 {
        return (0..n)
            .map(|i| {
                let t = 2.0 * PI * (i as f64 + 0.5) / n as f64;
                vec![t.cos(), t.sin()]
            })
            .collect();
    }
    if m == 3 {
        let golden = PI * (3.0 - 5f64.sqrt());
        return (0..n)
            .map(|i| {
                let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
                let r = (1.0 - z * z).sqrt();
                let phi = golden * i as f64;
                vec![r * phi.cos(), r * phi.sin(), z]
            })
            .collect();
    }
    let pairs = m.div_ceil(2);
    let primes = first_primes(2 * pairs);
    (1..=n)
        .map(|i| {
            let mut g = Vec::with_capacity(2 * pairs);
            for p in 0..pairs {
                let u1 = radical_inverse(i, primes[2 * p]).max(1e-300);
                let u2 = radical_inverse(i, primes[2 * p + 1]);
                let r = (-2.0 * u1.ln()).sqrt();
                g.push(r * (2.0 * PI * u2).cos());
                g.push(r * (2.0 * PI * u2).sin());
            }
            g.truncate(m);
            let nrm = linalg::norm(&g).max(1e-300);
            linalg::scale(&g, 1.0 / nrm)
        })
        .collect()
}

fn radical_inverse(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

fn first_primes(n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2;
    while out.len() < n {
        if (2..c).take_while(|d| d * d <= c).all(|d| c % d != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}
