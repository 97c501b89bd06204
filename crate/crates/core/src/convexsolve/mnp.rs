//! Wolfe's minimum-norm-point algorithm over the convex hull of a finite set.

use nalgebra::{DMatrix, DVector};

use crate::linalg::{axpy, dot};
use crate::{Error, Result};

/// Point of minimum Euclidean norm in `conv(points)` together with its
/// convex weights (indexed like `points`).
pub(crate) fn wolfe(points: &[Vec<f64>], tol: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = points.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    let m = points[0].len();
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max).max(1e-300);
    let cap = 50 * n.max(2);

    let start = (0..n)
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .unwrap();
    let mut corral: Vec<usize> = vec![start];
    let mut w: Vec<f64> = vec![1.0];
    let mut x = points[start].clone();

    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > cap {
            return Err(Error::SolverStall { iterations });
        }
        let xx = dot(&x, &x);
        let (j, xv) = (0..n)
            .map(|i| (i, dot(&x, &points[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let gap = xx - xv;
        if gap <= tol * scale {
            break;
        }
        if corral.contains(&j) {
            // no progress possible; accept if the certificate is nearly met
            if gap <= 1e3 * tol * scale {
                break;
            }
            return Err(Error::SolverStall { iterations });
        }
        corral.push(j);
        w.push(0.0);

        // minor cycle
        loop {
            let alpha = affine_minimizer(points, &corral).ok_or(Error::SolverStall { iterations })?;
            if alpha.iter().all(|&a| a > 1e-14) {
                w = alpha;
                break;
            }
            let mut theta = 1.0f64;
            for (wi, ai) in w.iter().zip(&alpha) {
                if *ai <= 1e-14 && wi - ai > 0.0 {
                    theta = theta.min(wi / (wi - ai));
                }
            }
            for (wi, ai) in w.iter_mut().zip(&alpha) {
                *wi = (1.0 - theta) * *wi + theta * ai;
            }
            let before = corral.len();
            let mut k = 0;
            while k < corral.len() {
                if w[k] <= 1e-14 {
                    corral.remove(k);
                    w.remove(k);
                } else {
                    k += 1;
                }
            }
            if corral.len() == before {
                // drop the smallest weight to guarantee progress
                let (k, _) = w.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).unwrap();
                corral.remove(k);
                w.remove(k);
            }
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= s);
            if corral.len() == 1 {
                w = vec![1.0];
                break;
            }
        }
        x = vec![0.0; m];
        for (&i, &wi) in corral.iter().zip(&w) {
            axpy(&mut x, wi, &points[i]);
        }
    }
    let mut weights = vec![0.0; n];
    for (&i, &wi) in corral.iter().zip(&w) {
        weights[i] = wi;
    }
    Ok((x, weights))
}

/// Minimiser of `‖Σ α_i p_i‖` over the affine hull of the corral
/// (`Σ α_i = 1`), solved through the bordered Gram system.
fn affine_minimizer(points: &[Vec<f64>], corral: &[usize]) -> Option<Vec<f64>> {
    let s = corral.len();
    let mut a = DMatrix::<f64>::zeros(s + 1, s + 1);
    for (i, &pi) in corral.iter().enumerate() {
        for (j, &pj) in corral.iter().enumerate() {
            a[(i, j)] = dot(&points[pi], &points[pj]);
        }
        a[(i, s)] = 1.0;
        a[(s, i)] = 1.0;
    }
    let mut b = DVector::<f64>::zeros(s + 1);
    b[s] = 1.0;
    let sol = a.clone().lu().solve(&b).or_else(|| a.svd(true, true).solve(&b, 1e-14).ok())?;
    let alpha: Vec<f64> = sol.iter().take(s).copied().collect();
    if alpha.iter().any(|v| !v.is_finite()) {
        return None;
    }
    Some(alpha)
}
