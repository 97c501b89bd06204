//! Neutral and density-weighted beliefs over polytopes, their expectations,
//! and distances between them.
//!
//! Total variation follows the un-halved convention
//! `d_TV(μ, ν) = sup_{‖f‖∞ <= 1} |E_μ f − E_ν f|`, so values lie in `[0, 2]`
//! and uniform laws on different affine hulls are at distance 2.

mod distances;
mod integrand;
mod quadrature;
mod sampling;
mod transport;

use serde::{Deserialize, Serialize};

use crate::geomkernel::Polytope;
use crate::{Error, Result, Tolerances};

pub use distances::{tv_distance, w1_distance, w1_tv_inequality_check, MeasurePair, W1Estimate, W1TvReport};
pub use integrand::{Integrand, IntegrandKind, Opaque, Polynomial, Term, ThetaFamily};
pub use sampling::sample_uniform;

/// Samples used for opaque integrands.
pub const MC_SAMPLES: usize = 20_000;
/// Sample points used to check positivity of a density.
pub const POSITIVITY_SAMPLES: usize = 256;

/// Law over `S(x)`: uniform, or with a density against the uniform law.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Belief {
    Neutral,
    WithDensity { h: Integrand },
}

impl Belief {
    pub fn expect(&self, p: &Polytope, f: &Integrand, tol: &Tolerances) -> Result<Estimate> {
        match self {
            Belief::Neutral => expect_neutral(p, f, tol),
            Belief::WithDensity { h } => expect_density(p, h, f, tol),
        }
    }
}

/// Expectation with its standard error (zero on the exact path).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

impl Estimate {
    fn exact(value: f64) -> Self {
        Self { value, std_error: 0.0 }
    }
}

/// `E[f]` under the uniform law on `P`.
///
/// Polynomials are integrated exactly on a triangulation with a
/// Grundmann–Möller rule of sufficient degree; opaque integrands use Monte
/// Carlo with [`MC_SAMPLES`] points.
pub fn expect_neutral(p: &Polytope, f: &Integrand, tol: &Tolerances) -> Result<Estimate> {
    match f.as_polynomial() {
        Some(poly) => {
            check_degree(poly, tol)?;
            integrate_polynomial(p, poly).map(Estimate::exact)
        }
        None => expect_mc(p, f, MC_SAMPLES, tol.rng_seed),
    }
}

/// Monte Carlo estimate of `E[f]` under the uniform law on `P`.
pub fn expect_mc(p: &Polytope, f: &Integrand, n: usize, seed: u64) -> Result<Estimate> {
    if p.dim() == 0 {
        return Ok(Estimate::exact(f.eval(&p.vertices()[0])));
    }
    let vals: Vec<f64> = sample_uniform(p, n, seed)?.iter().map(|y| f.eval(y)).collect();
    let nf = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / nf;
    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0).max(1.0);
    Ok(Estimate { value: mean, std_error: (var / nf).sqrt() })
}

/// `E[h f] / E[h]` under the uniform law on `P`.
pub fn expect_density(p: &Polytope, h: &Integrand, f: &Integrand, tol: &Tolerances) -> Result<Estimate> {
    let mut probe = sample_uniform(p, POSITIVITY_SAMPLES, tol.rng_seed)?;
    probe.extend(p.vertices().iter().cloned());
    for y in &probe {
        let v = h.eval(y);
        if !(v > 0.0) {
            return Err(Error::PositivityViolation { value: v });
        }
    }
    let hf = h.mul(f);
    let (num, den) = match (hf.as_polynomial(), h.as_polynomial(), f.as_polynomial()) {
        (Some(hf), Some(hp), Some(fp)) => {
            check_degree(hp, tol)?;
            check_degree(fp, tol)?;
            (Estimate::exact(integrate_polynomial(p, hf)?), Estimate::exact(integrate_polynomial(p, hp)?))
        }
        _ => (expect_neutral(p, &hf, tol)?, expect_neutral(p, h, tol)?),
    };
    let value = num.value / den.value;
    let std_error = (num.std_error.powi(2) + (value * den.std_error).powi(2)).sqrt() / den.value.abs();
    Ok(Estimate { value, std_error })
}

fn check_degree(poly: &Polynomial, tol: &Tolerances) -> Result<()> {
    let degree = poly.degree();
    if degree > tol.degree_cap {
        return Err(Error::DegreeCapExceeded { degree, cap: tol.degree_cap });
    }
    Ok(())
}

fn integrate_polynomial(p: &Polytope, poly: &Polynomial) -> Result<f64> {
    if poly.nvars != p.ambient_dim() {
        return Err(Error::DimensionMismatch { expected: p.ambient_dim(), got: poly.nvars });
    }
    if p.dim() == 0 {
        return Ok(poly.eval(&p.vertices()[0]));
    }
    let rule = quadrature::grundmann_moller(p.dim(), quadrature::index_for_degree(poly.degree()));
    let verts = p.vertices();
    let vols = p.simplex_volumes();
    let mut acc = 0.0;
    let mut total = 0.0;
    for (s, vol) in p.triangulate().iter().zip(vols) {
        let mut mean = 0.0;
        for (bary, w) in &rule {
            let mut y = vec![0.0; p.ambient_dim()];
            for (&i, &b) in s.iter().zip(bary) {
                crate::linalg::axpy(&mut y, b, &verts[i]);
            }
            mean += w * poly.eval(&y);
        }
        acc += vol * mean;
        total += vol;
    }
    Ok(acc / total)
}

#[cfg(test)]
mod tests;
