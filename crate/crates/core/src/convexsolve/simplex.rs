//! Dense two-phase tableau simplex with Bland's anti-cycling rule, generic
//! over [`Scalar`] so the same code runs in floating point or exact rationals.

use crate::scalar::Scalar;

use super::LpStatus;

/// Pivot threshold for inexact arithmetic.
const PIVOT_TOL: f64 = 1e-11;
const MAX_FLOAT_PIVOTS: usize = 200_000;

#[derive(Debug, Clone)]
pub(crate) struct SimplexOutcome<S> {
    pub status: LpStatus,
    pub point: Vec<S>,
    pub value: S,
    /// Constraint rows whose slack is nonbasic at the returned vertex.
    pub active: Vec<usize>,
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    obj: Vec<S>,
    obj_rhs: S,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        self.rhs[r] = self.rhs[r].clone() / p;
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if f.is_zero_tol(0.0) {
                continue;
            }
            for (x, pr) in self.rows[i].iter_mut().zip(&prow) {
                *x = x.clone() - f.clone() * pr.clone();
            }
            self.rhs[i] = self.rhs[i].clone() - f * prhs.clone();
        }
        let f = self.obj[c].clone();
        if !f.is_zero_tol(0.0) {
            for (x, pr) in self.obj.iter_mut().zip(&prow) {
                *x = x.clone() - f.clone() * pr.clone();
            }
            self.obj_rhs = self.obj_rhs.clone() - f * prhs;
        }
        self.basis[r] = c;
    }

    fn set_objective(&mut self, cost: &[S]) {
        self.obj = cost.to_vec();
        self.obj_rhs = S::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_zero_tol(0.0) {
                continue;
            }
            for (x, a) in self.obj.iter_mut().zip(&self.rows[i]) {
                *x = x.clone() - cb.clone() * a.clone();
            }
            self.obj_rhs = self.obj_rhs.clone() - cb * self.rhs[i].clone();
        }
    }

    /// Runs Bland's rule over the columns `0..allowed`. Returns `false` on
    /// unboundedness.
    fn optimize(&mut self, allowed: usize) -> bool {
        let tol = if S::EXACT { 0.0 } else { PIVOT_TOL };
        let mut pivots = 0usize;
        loop {
            let Some(col) = (0..allowed).find(|&j| self.obj[j].is_neg(tol)) else {
                return true;
            };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_pos(tol) {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                best = match best {
                    None => Some((i, ratio)),
                    Some((bi, br)) => {
                        let d = ratio.clone() - br.clone();
                        if d.is_neg(tol) || (d.is_zero_tol(tol) && self.basis[i] < self.basis[bi]) {
                            Some((i, ratio))
                        } else {
                            Some((bi, br))
                        }
                    }
                };
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, col);
            pivots += 1;
            if !S::EXACT && pivots > MAX_FLOAT_PIVOTS {
                return true;
            }
        }
    }
}

/// Minimise `c·y` subject to `rows·y <= rhs` with `y` free.
pub(crate) fn solve<S: Scalar>(c: &[S], rows: &[Vec<S>], rhs: &[S], feas_tol: f64) -> SimplexOutcome<S> {
    let m = c.len();
    let p = rows.len();
    let tol = if S::EXACT { 0.0 } else { PIVOT_TOL };
    let n_art = rhs.iter().filter(|b| b.is_neg(0.0)).count();
    let width = 2 * m + p + n_art;
    let mut t = Tableau {
        rows: Vec::with_capacity(p),
        rhs: Vec::with_capacity(p),
        basis: Vec::with_capacity(p),
        obj: vec![S::zero(); width],
        obj_rhs: S::zero(),
    };
    let mut art = 0usize;
    for (i, (row, b)) in rows.iter().zip(rhs).enumerate() {
        let neg = b.is_neg(0.0);
        let sgn = if neg { -S::one() } else { S::one() };
        let mut r = vec![S::zero(); width];
        for j in 0..m {
            r[j] = sgn.clone() * row[j].clone();
            r[m + j] = -(sgn.clone() * row[j].clone());
        }
        r[2 * m + i] = sgn.clone();
        if neg {
            let col = 2 * m + p + art;
            r[col] = S::one();
            t.basis.push(col);
            art += 1;
        } else {
            t.basis.push(2 * m + i);
        }
        t.rows.push(r);
        t.rhs.push(sgn * b.clone());
    }

    if n_art > 0 {
        let mut cost = vec![S::zero(); width];
        for x in cost.iter_mut().skip(2 * m + p) {
            *x = S::one();
        }
        t.set_objective(&cost);
        t.optimize(width);
        let residual = -t.obj_rhs.clone();
        let scale = 1.0 + rhs.iter().map(|b| b.to_f64().abs()).fold(0.0, f64::max);
        if residual.is_pos(if S::EXACT { 0.0 } else { feas_tol * scale }) {
            return infeasible(m);
        }
        // drive artificial variables out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= 2 * m + p {
                match (0..2 * m + p).find(|&j| !t.rows[i][j].is_zero_tol(tol)) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![S::zero(); width];
    for j in 0..m {
        cost[j] = c[j].clone();
        cost[m + j] = -c[j].clone();
    }
    t.set_objective(&cost);
    if !t.optimize(2 * m + p) {
        return SimplexOutcome {
            status: LpStatus::Unbounded,
            point: vec![S::zero(); m],
            value: S::zero(),
            active: Vec::new(),
        };
    }

    let mut x = vec![S::zero(); width];
    for (i, &b) in t.basis.iter().enumerate() {
        x[b] = t.rhs[i].clone();
    }
    let point: Vec<S> = (0..m).map(|j| x[j].clone() - x[m + j].clone()).collect();
    let value = crate::scalar::dot(c, &point);
    let basic: std::collections::HashSet<usize> = t.basis.iter().copied().collect();
    let active = (0..p).filter(|i| !basic.contains(&(2 * m + i))).collect();
    SimplexOutcome { status: LpStatus::Optimal, point, value, active }
}

fn infeasible<S: Scalar>(m: usize) -> SimplexOutcome<S> {
    SimplexOutcome {
        status: LpStatus::Infeasible,
        point: vec![S::zero(); m],
        value: S::zero(),
        active: Vec::new(),
    }
}
