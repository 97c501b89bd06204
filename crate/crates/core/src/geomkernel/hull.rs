//! Hull computations in intrinsic (frame) coordinates and triangulation.

use crate::convexsolve::dd::{facets_of_points, Facet};
use crate::linalg::{self, dot, left_svd, sub};

/// Extreme-point indices and facets of `conv(points)`, where `points` lie in
/// `R^k` and affinely span it.
pub(crate) fn local_hull(points: &[Vec<f64>], k: usize, tol: f64) -> (Vec<usize>, Vec<Facet>) {
    match k {
        0 => (vec![0], Vec::new()),
        1 => {
            let (mut lo, mut hi) = (0, 0);
            for (i, p) in points.iter().enumerate() {
                if p[0] < points[lo][0] {
                    lo = i;
                }
                if p[0] > points[hi][0] {
                    hi = i;
                }
            }
            let facets = vec![
                Facet { normal: vec![1.0], offset: points[hi][0], incident: vec![hi] },
                Facet { normal: vec![-1.0], offset: -points[lo][0], incident: vec![lo] },
            ];
            let mut ext = vec![lo, hi];
            ext.sort_unstable();
            (ext, facets)
        }
        2 => polygon_hull(points, tol),
        _ => {
            let facets = facets_of_points(points, tol).unwrap_or_default();
            let ext = (0..points.len())
                .filter(|&i| {
                    let normals: Vec<&Vec<f64>> =
                        facets.iter().filter(|f| f.incident.contains(&i)).map(|f| &f.normal).collect();
                    rank_of(&normals, k) == k
                })
                .collect();
            (ext, facets)
        }
    }
}

fn rank_of(vectors: &[&Vec<f64>], k: usize) -> usize {
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in vectors {
        let mut w = (*v).clone();
        for b in &basis {
            let c = dot(&w, b);
            linalg::axpy(&mut w, -c, b);
        }
        let n = linalg::norm(&w);
        if n > 1e-7 {
            basis.push(linalg::scale(&w, 1.0 / n));
            if basis.len() == k {
                break;
            }
        }
    }
    basis.len()
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; points within `tol` of the line through their
/// hull neighbours are discarded.
fn polygon_hull(points: &[Vec<f64>], tol: f64) -> (Vec<usize>, Vec<Facet>) {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| linalg::lex_cmp(&points[a], &points[b]));
    let keep_turn = |o: usize, a: usize, b: usize| {
        let c = cross(&points[o], &points[a], &points[b]);
        let base = linalg::dist(&points[o], &points[b]).max(1e-300);
        c / base > tol
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &idx {
        while lower.len() >= 2 && !keep_turn(lower[lower.len() - 2], lower[lower.len() - 1], i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in idx.iter().rev() {
        while upper.len() >= 2 && !keep_turn(upper[upper.len() - 2], upper[upper.len() - 1], i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    let ccw: Vec<usize> = lower.into_iter().chain(upper).collect();
    let n = ccw.len();
    let mut facets = Vec::with_capacity(n);
    for j in 0..n {
        let a = ccw[j];
        let b = ccw[(j + 1) % n];
        let d = sub(&points[b], &points[a]);
        let len = linalg::norm(&d);
        let normal = vec![d[1] / len, -d[0] / len];
        facets.push(Facet { offset: dot(&normal, &points[a]), normal, incident: vec![a, b] });
    }
    let mut ext = ccw;
    ext.sort_unstable();
    (ext, facets)
}

/// Triangulation of `conv(points)` (all points extreme, affinely spanning
/// `R^k`) into `k`-simplices given as index lists.
pub(crate) fn triangulate(points: &[Vec<f64>], k: usize, facets: &[Facet], tol: f64) -> Vec<Vec<usize>> {
    match k {
        0 => vec![vec![0]],
        1 => {
            let inc: Vec<usize> = facets.iter().map(|f| f.incident[0]).collect();
            vec![vec![inc[1], inc[0]]]
        }
        _ => {
            let apex = 0usize;
            let mut out = Vec::new();
            for f in facets.iter().filter(|f| !f.incident.contains(&apex)) {
                if k == 2 {
                    out.push(vec![apex, f.incident[0], f.incident[1]]);
                    continue;
                }
                for s in triangulate_subset(points, &f.incident, k - 1, tol) {
                    let mut simplex = vec![apex];
                    simplex.extend(s);
                    out.push(simplex);
                }
            }
            out
        }
    }
}

/// Triangulate the `dim`-dimensional face spanned by `points[subset]`,
/// returning indices into `points`.
fn triangulate_subset(points: &[Vec<f64>], subset: &[usize], dim: usize, tol: f64) -> Vec<Vec<usize>> {
    let pts: Vec<Vec<f64>> = subset.iter().map(|&i| points[i].clone()).collect();
    let origin = linalg::mean(&pts);
    let diffs: Vec<Vec<f64>> = pts.iter().map(|p| sub(p, &origin)).collect();
    let (_, basis) = left_svd(&diffs, origin.len());
    let local: Vec<Vec<f64>> = diffs
        .iter()
        .map(|d| basis.iter().take(dim).map(|b| dot(b, d)).collect())
        .collect();
    let (ext, facets) = local_hull(&local, dim, tol);
    // keep only extreme points of the face, re-indexed
    let sub_local: Vec<Vec<f64>> = ext.iter().map(|&i| local[i].clone()).collect();
    let (_, facets2) = if ext.len() == local.len() {
        (ext.clone(), facets)
    } else {
        local_hull(&sub_local, dim, tol)
    };
    triangulate(&sub_local, dim, &facets2, tol)
        .into_iter()
        .map(|s| s.into_iter().map(|i| subset[ext[i]]).collect())
        .collect()
}

/// `k`-volume of the simplex with vertices `pts` (`k + 1` points in `R^k`).
pub(crate) fn simplex_volume(pts: &[&Vec<f64>]) -> f64 {
    let k = pts.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let rows: Vec<Vec<f64>> = pts[1..].iter().map(|p| sub(p, pts[0])).collect();
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    linalg::det(&rows).abs() / fact
}
