use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Monomial `coef · Π y_i^{exps_i}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coef: f64,
}

/// Sparse real polynomial in `nvars` variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub nvars: usize,
    pub terms: Vec<Term>,
}

impl Polynomial {
    pub fn new(nvars: usize, terms: Vec<Term>) -> Result<Self> {
        for t in &terms {
            if t.exps.len() != nvars {
                return Err(Error::DimensionMismatch { expected: nvars, got: t.exps.len() });
            }
            if !t.coef.is_finite() {
                return Err(Error::NonFinite("polynomial coefficient"));
            }
        }
        Ok(Self { nvars, terms })
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self { nvars, terms: vec![Term { exps: vec![0; nvars], coef: c }] }
    }

    /// The coordinate function `y_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Self { nvars, terms: vec![Term { exps, coef: 1.0 }] }
    }

    /// `c0 + Σ coefs_i y_i`.
    pub fn affine(coefs: &[f64], c0: f64) -> Self {
        let n = coefs.len();
        let mut p = Self::constant(n, c0);
        for (i, &c) in coefs.iter().enumerate() {
            if c != 0.0 {
                let mut exps = vec![0; n];
                exps[i] = 1;
                p.terms.push(Term { exps, coef: c });
            }
        }
        p
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().filter(|t| t.coef != 0.0).map(|t| t.exps.iter().sum()).max().unwrap_or(0)
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coef * t.exps.iter().zip(y).map(|(&e, &v)| v.powi(e as i32)).product::<f64>())
            .sum()
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let exps = a.exps.iter().zip(&b.exps).map(|(x, y)| x + y).collect();
                terms.push(Term { exps, coef: a.coef * b.coef });
            }
        }
        Polynomial { nvars: self.nvars, terms }
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let terms = self.terms.iter().map(|t| Term { exps: t.exps.clone(), coef: t.coef * s }).collect();
        Polynomial { nvars: self.nvars, terms }
    }

    /// Fix the first `x.len()` variables; the result is a polynomial in the
    /// remaining ones.
    pub fn substitute_prefix(&self, x: &[f64]) -> Polynomial {
        let n = x.len();
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let f: f64 = t.exps[..n].iter().zip(x).map(|(&e, &v)| v.powi(e as i32)).product();
                Term { exps: t.exps[n..].to_vec(), coef: t.coef * f }
            })
            .collect();
        Polynomial { nvars: self.nvars - n, terms }
    }
}

/// Callback integrand; not serializable.
#[derive(Clone)]
pub struct Opaque(pub Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>);

impl fmt::Debug for Opaque {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Opaque(..)")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrandKind {
    Polynomial(Polynomial),
    #[serde(skip)]
    Opaque(Opaque),
}

/// Function of the outcome `y`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Integrand {
    pub kind: IntegrandKind,
    #[serde(default)]
    pub lip_hint: Option<f64>,
}

impl Integrand {
    pub fn polynomial(p: Polynomial) -> Self {
        Self { kind: IntegrandKind::Polynomial(p), lip_hint: None }
    }

    pub fn opaque(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { kind: IntegrandKind::Opaque(Opaque(Arc::new(f))), lip_hint: None }
    }

    pub fn constant(nvars: usize, c: f64) -> Self {
        Self::polynomial(Polynomial::constant(nvars, c))
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        match &self.kind {
            IntegrandKind::Polynomial(p) => p.eval(y),
            IntegrandKind::Opaque(f) => (f.0)(y),
        }
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        match &self.kind {
            IntegrandKind::Polynomial(p) => Some(p),
            IntegrandKind::Opaque(_) => None,
        }
    }

    /// Pointwise product; stays polynomial when both factors are.
    pub fn mul(&self, other: &Integrand) -> Integrand {
        match (self.as_polynomial(), other.as_polynomial()) {
            (Some(a), Some(b)) => Integrand::polynomial(a.mul(b)),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                Integrand::opaque(move |y| a.eval(y) * b.eval(y))
            }
        }
    }
}

/// Polynomial `θ(x, y)` in the variables `(x_1..x_n, y_1..y_m)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaFamily {
    /// Number of leading parameter variables.
    pub nx: usize,
    pub poly: Polynomial,
}

impl ThetaFamily {
    pub fn new(nx: usize, poly: Polynomial) -> Result<Self> {
        if poly.nvars < nx {
            return Err(Error::InvalidSpec(format!("theta has {} variables but nx = {nx}", poly.nvars)));
        }
        Ok(Self { nx, poly })
    }

    /// `θ(x, y) = y_i`, independent of `x`.
    pub fn coordinate(nx: usize, m: usize, i: usize) -> Self {
        let p = Polynomial::var(m, i);
        let terms = p
            .terms
            .into_iter()
            .map(|t| Term { exps: [vec![0; nx], t.exps].concat(), coef: t.coef })
            .collect();
        Self { nx, poly: Polynomial { nvars: nx + m, terms } }
    }

    /// `θ(x, ·)`.
    pub fn at(&self, x: &[f64]) -> Result<Integrand> {
        if x.len() != self.nx {
            return Err(Error::DimensionMismatch { expected: self.nx, got: x.len() });
        }
        Ok(Integrand::polynomial(self.poly.substitute_prefix(x)))
    }
}
