use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::convexsolve::{lp_solve, simplex, LpProblem, LpStatus};
use crate::geomkernel::Polytope;
use crate::linalg::dot;
use crate::scalar::Scalar;
use crate::{Error, Result, Tolerances};

/// Lower level `min_y {c·y : A x + B y <= b}` of a linear bilevel problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilevelLinearSpec {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b_mat: Vec<Vec<f64>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
}

impl BilevelLinearSpec {
    /// Checks shapes and certifies that `D = {(x, y) : A x + B y <= b}` is
    /// nonempty and bounded with `2(n + m)` LPs.
    pub fn new(a: Vec<Vec<f64>>, b_mat: Vec<Vec<f64>>, b: Vec<f64>, c: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        let s = Self { a, b_mat, b, c };
        s.validate_shape()?;
        s.x_bounds(tol)?;
        s.y_bounds(tol)?;
        Ok(s)
    }

    /// Unit-square lower level with the extra row `y_1 >= x`, `x ∈ [0, 1]`,
    /// and `c = (0, 1)`; its solution map is `x ↦ conv{(x, 0), (1, 0)}`.
    pub fn toy() -> Self {
        Self {
            a: vec![vec![0.0], vec![0.0], vec![0.0], vec![0.0], vec![1.0], vec![-1.0], vec![1.0]],
            b_mat: vec![
                vec![1.0, 0.0],
                vec![-1.0, 0.0],
                vec![0.0, 1.0],
                vec![0.0, -1.0],
                vec![-1.0, 0.0],
                vec![0.0, 0.0],
                vec![0.0, 0.0],
            ],
            b: vec![1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0],
            c: vec![0.0, 1.0],
        }
    }

    pub fn n(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    pub fn m(&self) -> usize {
        self.c.len()
    }

    pub(crate) fn validate_shape(&self) -> Result<()> {
        let p = self.b.len();
        if self.a.len() != p || self.b_mat.len() != p {
            return Err(Error::InvalidSpec(format!(
                "A, B and b must have the same number of rows ({}, {}, {p})",
                self.a.len(),
                self.b_mat.len()
            )));
        }
        let (n, m) = (self.n(), self.m());
        if let Some(r) = self.a.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: r.len() });
        }
        if let Some(r) = self.b_mat.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, got: r.len() });
        }
        let finite = self.a.iter().chain(&self.b_mat).flatten().chain(&self.b).chain(&self.c).all(|v| v.is_finite());
        if !finite {
            return Err(Error::NonFinite("bilevel data"));
        }
        Ok(())
    }

    fn joint_rows(&self) -> Vec<Vec<f64>> {
        self.a.iter().zip(&self.b_mat).map(|(a, b)| [a.clone(), b.clone()].concat()).collect()
    }

    /// Coordinate bounds of `D` over the variable range `range` of `(x, y)`.
    fn bounds(&self, range: std::ops::Range<usize>, tol: &Tolerances) -> Result<(Vec<f64>, Vec<f64>)> {
        let rows = self.joint_rows();
        let d = self.n() + self.m();
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for j in range {
            for s in [1.0, -1.0] {
                let mut c = vec![0.0; d];
                c[j] = s;
                let r = lp_solve(&LpProblem::new(c, rows.clone(), self.b.clone())?, false, tol.feas_tol);
                match r.status {
                    LpStatus::Optimal if s > 0.0 => lo.push(r.value),
                    LpStatus::Optimal => hi.push(-r.value),
                    LpStatus::Infeasible => return Err(Error::Infeasible),
                    LpStatus::Unbounded => return Err(Error::Unbounded),
                }
            }
        }
        Ok((lo, hi))
    }

    /// Bounding box of the projection of `D` onto `x`.
    pub fn x_bounds(&self, tol: &Tolerances) -> Result<(Vec<f64>, Vec<f64>)> {
        self.bounds(0..self.n(), tol)
    }

    /// Bounding box of the projection of `D` onto `y`.
    pub fn y_bounds(&self, tol: &Tolerances) -> Result<(Vec<f64>, Vec<f64>)> {
        self.bounds(self.n()..self.n() + self.m(), tol)
    }

    fn check_x(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: x.len() });
        }
        Ok(())
    }
}

/// `argmin_y {c·y : B y <= b − A x}`, built as the fiber cut by
/// `c·y <= v(x)` and `−c·y <= −v(x)`.
pub fn bilevel_solution(spec: &BilevelLinearSpec, x: &[f64], exact: bool, tol: &Tolerances) -> Result<Polytope> {
    face(spec, x, None, exact, tol)
}

/// `{y : B y <= b − A x, c·y <= v(x) + ε}`.
pub fn eps_argmin(spec: &BilevelLinearSpec, eps: f64, x: &[f64], exact: bool, tol: &Tolerances) -> Result<Polytope> {
    if !(eps > 0.0) {
        return Err(Error::InvalidSpec(format!("eps must be positive, got {eps}")));
    }
    face(spec, x, Some(eps), exact, tol)
}

fn face(spec: &BilevelLinearSpec, x: &[f64], eps: Option<f64>, exact: bool, tol: &Tolerances) -> Result<Polytope> {
    spec.check_x(x)?;
    let infeasible = || Error::ParameterInfeasible(x.to_vec());
    if exact {
        let q = BigRational::from_f64;
        let xr: Vec<BigRational> = x.iter().map(|&v| q(v)).collect();
        let mut rows: Vec<Vec<BigRational>> = spec.b_mat.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
        let mut rhs: Vec<BigRational> = spec
            .a
            .iter()
            .zip(&spec.b)
            .map(|(a, &b)| {
                let ar: Vec<BigRational> = a.iter().map(|&v| q(v)).collect();
                q(b) - crate::scalar::dot(&ar, &xr)
            })
            .collect();
        let c: Vec<BigRational> = spec.c.iter().map(|&v| q(v)).collect();
        let lp = simplex::solve(&c, &rows, &rhs, tol.feas_tol);
        match lp.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(infeasible()),
            LpStatus::Unbounded => return Err(Error::Unbounded),
        }
        let v = lp.value;
        match eps {
            None => {
                rows.push(c.clone());
                rhs.push(v.clone());
                rows.push(c.iter().map(|t| -t.clone()).collect());
                rhs.push(-v);
            }
            Some(e) => {
                rows.push(c);
                rhs.push(v + q(e));
            }
        }
        Polytope::from_rational_hrep(&rows, &rhs, tol).map_err(|e| match e {
            Error::Infeasible => infeasible(),
            e => e,
        })
    } else {
        let mut rows = spec.b_mat.clone();
        let mut rhs: Vec<f64> = spec.a.iter().zip(&spec.b).map(|(a, b)| b - dot(a, x)).collect();
        let lp = lp_solve(&LpProblem::new(spec.c.clone(), rows.clone(), rhs.clone())?, false, tol.feas_tol);
        match lp.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => return Err(infeasible()),
            LpStatus::Unbounded => return Err(Error::Unbounded),
        }
        match eps {
            None => {
                rows.push(spec.c.clone());
                rhs.push(lp.value);
                rows.push(spec.c.iter().map(|t| -t).collect());
                rhs.push(-lp.value);
            }
            Some(e) => {
                rows.push(spec.c.clone());
                rhs.push(lp.value + e);
            }
        }
        Polytope::from_rows_unchecked(&rows, &rhs, tol)?.ok_or_else(infeasible)
    }
}
