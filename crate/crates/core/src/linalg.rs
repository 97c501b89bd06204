//! Small dense helpers on `Vec<f64>` points.

use nalgebra::DMatrix;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub(crate) fn axpy(acc: &mut [f64], s: f64, x: &[f64]) {
    for (a, v) in acc.iter_mut().zip(x) {
        *a += s * v;
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

pub(crate) fn mean(points: &[Vec<f64>]) -> Vec<f64> {
    let m = points[0].len();
    let mut acc = vec![0.0; m];
    for p in points {
        axpy(&mut acc, 1.0, p);
    }
    scale(&acc, 1.0 / points.len() as f64)
}

/// Lexicographic comparison of float vectors (NaN-free input).
pub(crate) fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    a.len().cmp(&b.len())
}

/// Flip the sign so that the entry of largest magnitude is positive
/// (first such entry on ties).
pub(crate) fn canonical_sign(v: &mut [f64]) {
    let mut best = 0usize;
    for i in 1..v.len() {
        if v[i].abs() > v[best].abs() + 1e-12 {
            best = i;
        }
    }
    if !v.is_empty() && v[best] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Determinant of a square matrix given as rows.
pub(crate) fn det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    if n == 0 {
        return 1.0;
    }
    DMatrix::from_fn(n, n, |i, j| rows[i][j]).determinant()
}

/// Singular values (descending) and the full left singular basis of the
/// `m × n` column matrix whose columns are `cols`.
pub(crate) fn left_svd(cols: &[Vec<f64>], m: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    // Pad with zero columns so that U is square.
    let n = cols.len().max(m);
    let a = DMatrix::from_fn(m, n, |i, j| if j < cols.len() { cols[j][i] } else { 0.0 });
    let svd = a.svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sv: Vec<f64> = idx.iter().map(|&i| svd.singular_values[i]).collect();
    let basis = idx
        .iter()
        .map(|&i| u.column(i).iter().copied().collect::<Vec<f64>>())
        .collect();
    (sv, basis)
}

/// Orthonormal basis of the orthogonal complement of `span(basis)` in `R^m`.
/// `basis` must already be orthonormal.
pub(crate) fn complement(basis: &[Vec<f64>], m: usize) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for e in 0..m {
        let mut v = vec![0.0; m];
        v[e] = 1.0;
        for b in basis.iter().chain(out.iter()) {
            let c = dot(&v, b);
            axpy(&mut v, -c, b);
        }
        // second pass for numerical orthogonality
        for b in basis.iter().chain(out.iter()) {
            let c = dot(&v, b);
            axpy(&mut v, -c, b);
        }
        let n = norm(&v);
        if n > 1e-8 {
            out.push(scale(&v, 1.0 / n));
        }
        if basis.len() + out.len() == m {
            break;
        }
    }
    out
}

/// Solve `a x = b` for a square system; `None` if singular.
pub(crate) fn solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
    let n = a.len();
    let mat = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let rhs = nalgebra::DVector::from_column_slice(b);
    mat.lu().solve(&rhs).map(|x| x.iter().copied().collect())
}
