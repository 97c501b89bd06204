//! Linear-programming and minimum-norm subproblems backing the geometry layer.

pub(crate) mod dd;
mod mnp;
pub(crate) mod simplex;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::{Error, Result};

/// `min c·y  s.t.  constraints·y <= rhs`, `y` free.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpProblem {
    pub objective: Vec<f64>,
    pub constraints: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
}

impl LpProblem {
    pub fn new(objective: Vec<f64>, constraints: Vec<Vec<f64>>, rhs: Vec<f64>) -> Result<Self> {
        let m = objective.len();
        if constraints.len() != rhs.len() {
            return Err(Error::DimensionMismatch { expected: constraints.len(), got: rhs.len() });
        }
        if let Some(r) = constraints.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: r.len() });
        }
        let finite = objective.iter().chain(rhs.iter()).chain(constraints.iter().flatten()).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("lp data"));
        }
        Ok(Self { objective, constraints, rhs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpResult {
    pub status: LpStatus,
    pub value: f64,
    pub point: Vec<f64>,
    /// Rows active at the returned basic solution (their slack is nonbasic).
    pub basis: Vec<usize>,
}

/// Simplex method with Bland's rule. `exact` runs the whole solve in
/// arbitrary-precision rationals.
pub fn lp_solve(prob: &LpProblem, exact: bool, feas_tol: f64) -> LpResult {
    if exact {
        let c: Vec<BigRational> = prob.objective.iter().map(|&v| BigRational::from_f64(v)).collect();
        let rows: Vec<Vec<BigRational>> = prob
            .constraints
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_f64(v)).collect())
            .collect();
        let rhs: Vec<BigRational> = prob.rhs.iter().map(|&v| BigRational::from_f64(v)).collect();
        let out = simplex::solve(&c, &rows, &rhs, feas_tol);
        LpResult {
            status: out.status,
            value: out.value.to_f64(),
            point: out.point.iter().map(Scalar::to_f64).collect(),
            basis: out.active,
        }
    } else {
        let out = simplex::solve(&prob.objective, &prob.constraints, &prob.rhs, feas_tol);
        LpResult { status: out.status, value: out.value, point: out.point, basis: out.active }
    }
}

/// Minimum-norm point of `conv(vertices)` (Wolfe). The result satisfies
/// `⟨p, v − p⟩ >= −feas_tol·max‖v‖²` for every input vertex.
pub fn min_norm_point(vertices: &[Vec<f64>], feas_tol: f64) -> Result<Vec<f64>> {
    mnp::wolfe(vertices, feas_tol).map(|(p, _)| p)
}

/// Drop every row whose removal does not enlarge `{y : m·y <= q}`, testing
/// rows in index order against the rows kept so far.
pub fn remove_redundant(m: &[Vec<f64>], q: &[f64], feas_tol: f64) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    let dim = m.first().map_or(0, |r| r.len());
    let feas = lp_solve(&LpProblem::new(vec![0.0; dim], m.to_vec(), q.to_vec())?, false, feas_tol);
    if feas.status == LpStatus::Infeasible {
        return Err(Error::Infeasible);
    }
    let mut keep = vec![true; m.len()];
    for i in 0..m.len() {
        let (rows, rhs): (Vec<Vec<f64>>, Vec<f64>) = (0..m.len())
            .filter(|&j| j != i && keep[j])
            .map(|j| (m[j].clone(), q[j]))
            .unzip();
        if rows.is_empty() {
            continue;
        }
        let neg: Vec<f64> = m[i].iter().map(|v| -v).collect();
        let res = lp_solve(&LpProblem { objective: neg, constraints: rows, rhs }, false, feas_tol);
        let scale = 1.0 + crate::linalg::norm(&m[i]);
        if res.status == LpStatus::Optimal && -res.value <= q[i] + feas_tol * scale {
            keep[i] = false;
        }
    }
    Ok((0..m.len()).filter(|&i| keep[i]).map(|i| (m[i].clone(), q[i])).unzip())
}
