//! Double-description method for the extreme rays of a pointed polyhedral
//! cone `{z : a_i·z >= 0}`, plus the two polytope conversions built on it.

use crate::scalar::{dot, Scalar};

/// Fixed-width bitset over constraint indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        Self { words: vec![0; n.div_ceil(64).max(1)] }
    }
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    pub fn and(&self, o: &Self) -> Self {
        Self { words: self.words.iter().zip(&o.words).map(|(a, b)| a & b).collect() }
    }
    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn is_superset(&self, o: &Self) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & b == *b)
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Ray<S> {
    pub z: Vec<S>,
    /// Indices of the constraints that are tight on this ray.
    pub zero: BitSet,
}

/// Extreme rays of `{z ∈ R^d : rows[i]·z >= 0 ∀i}`. Returns `None` when the
/// rows do not span `R^d` (the cone contains a line).
///
/// For inexact scalars each row should be normalised; a product is treated as
/// zero when its magnitude is at most `tol`.
pub(crate) fn extreme_rays<S: Scalar>(rows: &[Vec<S>], d: usize, tol: f64) -> Option<Vec<Ray<S>>> {
    let tol = if S::EXACT { 0.0 } else { tol };
    let initial = independent_rows(rows, d)?;
    let inv = inverse(&initial.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>())?;
    let n = rows.len();

    let mut rays: Vec<Ray<S>> = (0..d)
        .map(|j| {
            let mut z: Vec<S> = (0..d).map(|i| inv[i][j].clone()).collect();
            S::normalize_ray(&mut z);
            let mut zero = BitSet::new(n);
            for (k, &r) in initial.iter().enumerate() {
                if k != j {
                    zero.insert(r);
                }
            }
            Ray { z, zero }
        })
        .collect();

    let mut in_initial = vec![false; n];
    for &i in &initial {
        in_initial[i] = true;
    }
    for (i, row) in rows.iter().enumerate() {
        if in_initial[i] {
            continue;
        }
        let vals: Vec<S> = rays.iter().map(|r| dot(row, &r.z)).collect();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut zer = Vec::new();
        for (k, v) in vals.iter().enumerate() {
            match v.sign(tol) {
                std::cmp::Ordering::Greater => pos.push(k),
                std::cmp::Ordering::Less => neg.push(k),
                std::cmp::Ordering::Equal => zer.push(k),
            }
        }
        if neg.is_empty() {
            for &k in &zer {
                rays[k].zero.insert(i);
            }
            continue;
        }
        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zero.and(&rays[q].zero);
                if d >= 2 && common.count() < d - 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !r.zero.is_superset(&common));
                if !adjacent {
                    continue;
                }
                let vp = vals[p].clone();
                let vq = vals[q].clone();
                let mut z: Vec<S> = rays[q]
                    .z
                    .iter()
                    .zip(&rays[p].z)
                    .map(|(a, b)| vp.clone() * a.clone() - vq.clone() * b.clone())
                    .collect();
                S::normalize_ray(&mut z);
                let mut zero = common;
                zero.insert(i);
                created.push(Ray { z, zero });
            }
        }
        let mut next: Vec<Ray<S>> = Vec::with_capacity(pos.len() + zer.len() + created.len());
        for &k in &pos {
            next.push(rays[k].clone());
        }
        for &k in &zer {
            let mut r = rays[k].clone();
            r.zero.insert(i);
            next.push(r);
        }
        next.extend(created);
        rays = next;
    }
    Some(rays)
}

/// Greedy choice of `d` linearly independent rows (in index order).
fn independent_rows<S: Scalar>(rows: &[Vec<S>], d: usize) -> Option<Vec<usize>> {
    let tol = if S::EXACT { 0.0 } else { 1e-9 };
    let mut chosen = Vec::new();
    let mut echelon: Vec<(usize, Vec<S>)> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (piv, e) in &echelon {
            let f = v[*piv].clone() / e[*piv].clone();
            if f.is_zero_tol(0.0) {
                continue;
            }
            for (x, y) in v.iter_mut().zip(e) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        let scale = crate::scalar::max_abs(row).to_f64().max(1e-300);
        let (piv, best) = v
            .iter()
            .enumerate()
            .map(|(j, x)| (j, x.abs()))
            .fold((0, S::zero()), |acc, (j, a)| if a > acc.1 { (j, a) } else { acc });
        if best.is_pos(0.0) && best.to_f64() / scale > tol {
            echelon.push((piv, v));
            chosen.push(i);
            if chosen.len() == d {
                return Some(chosen);
            }
        }
    }
    None
}

fn inverse<S: Scalar>(a: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = a.len();
    let mut m: Vec<Vec<S>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { S::one() } else { S::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| {
            m[x][col].abs().partial_cmp(&m[y][col].abs()).unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if m[piv][col].is_zero_tol(0.0) {
            return None;
        }
        m.swap(col, piv);
        let p = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let prow = m[col].clone();
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = m[r][col].clone();
            if f.is_zero_tol(0.0) {
                continue;
            }
            for (x, y) in m[r].iter_mut().zip(&prow) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub(crate) enum VertexEnumeration<S> {
    Vertices(Vec<Vec<S>>),
    Empty,
    Unbounded,
}

/// Vertices of `{x : rows·x <= rhs}` through the homogenised cone
/// `{(t, x) : rhs_i t − rows_i·x >= 0, t >= 0}`.
pub(crate) fn hrep_to_vertices<S: Scalar>(rows: &[Vec<S>], rhs: &[S], tol: f64) -> VertexEnumeration<S> {
    let m = rows.first().map_or(0, |r| r.len());
    let d = m + 1;
    let mut cone: Vec<Vec<S>> = Vec::with_capacity(rows.len() + 1);
    for (r, b) in rows.iter().zip(rhs) {
        if r.iter().all(|x| x.is_zero_tol(0.0)) {
            if b.is_neg(if S::EXACT { 0.0 } else { tol }) {
                return VertexEnumeration::Empty;
            }
            continue;
        }
        let mut h = Vec::with_capacity(d);
        h.push(b.clone());
        h.extend(r.iter().map(|x| -x.clone()));
        if !S::EXACT {
            let n = h.iter().map(|x| x.to_f64() * x.to_f64()).sum::<f64>().sqrt();
            let n = S::from_f64(n);
            h.iter_mut().for_each(|x| *x = x.clone() / n.clone());
        }
        cone.push(h);
    }
    let mut t_row = vec![S::zero(); d];
    t_row[0] = S::one();
    cone.push(t_row);
    let Some(rays) = extreme_rays(&cone, d, tol) else {
        return VertexEnumeration::Unbounded;
    };
    let mut out = Vec::new();
    for r in rays {
        let t = r.z[0].clone();
        if t.is_pos(if S::EXACT { 0.0 } else { tol }) {
            out.push(r.z[1..].iter().map(|x| x.clone() / t.clone()).collect());
        } else if r.z[1..].iter().any(|x| !x.is_zero_tol(if S::EXACT { 0.0 } else { tol })) {
            return VertexEnumeration::Unbounded;
        }
    }
    if out.is_empty() {
        VertexEnumeration::Empty
    } else {
        VertexEnumeration::Vertices(out)
    }
}

/// A facet `normal·t <= offset` of a full-dimensional point set in `R^k`,
/// together with the indices of the points lying on it.
#[derive(Debug, Clone)]
pub(crate) struct Facet {
    pub normal: Vec<f64>,
    pub offset: f64,
    pub incident: Vec<usize>,
}

/// Facets of `conv(points)` where the points affinely span `R^k` (`k >= 1`),
/// via the extreme rays of the cone of valid inequalities
/// `{(b, a) : b − a·p_i >= 0}`.
pub(crate) fn facets_of_points(points: &[Vec<f64>], tol: f64) -> Option<Vec<Facet>> {
    let k = points.first()?.len();
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|p| {
            let mut r = Vec::with_capacity(k + 1);
            r.push(1.0);
            r.extend(p.iter().map(|x| -x));
            let n = crate::linalg::norm(&r);
            r.iter().map(|x| x / n).collect()
        })
        .collect();
    let rays = extreme_rays(&rows, k + 1, tol)?;
    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        let a = &r.z[1..];
        let n = crate::linalg::norm(a);
        if n <= tol {
            continue;
        }
        out.push(Facet {
            normal: a.iter().map(|x| x / n).collect(),
            offset: r.z[0] / n,
            incident: r.zero.iter().filter(|&i| i < points.len()).collect(),
        });
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn square_rows() -> (Vec<Vec<f64>>, Vec<f64>) {
        (
            vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0], vec![0.0, -1.0]],
            vec![1.0, 0.0, 1.0, 0.0],
        )
    }

    #[test]
    fn square_vertices_float() {
        let (r, b) = square_rows();
        let VertexEnumeration::Vertices(mut v) = hrep_to_vertices(&r, &b, 1e-9) else {
            panic!("expected vertices")
        };
        v.sort_by(|a, b| crate::linalg::lex_cmp(a, b));
        assert_eq!(v.len(), 4);
        assert!((v[3][0] - 1.0).abs() < 1e-12 && (v[3][1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn square_vertices_exact() {
        let (r, b) = square_rows();
        let r: Vec<Vec<BigRational>> = r.iter().map(|x| x.iter().map(|&v| BigRational::from_f64(v)).collect()).collect();
        let b: Vec<BigRational> = b.iter().map(|&v| BigRational::from_f64(v)).collect();
        let VertexEnumeration::Vertices(v) = hrep_to_vertices(&r, &b, 0.0) else {
            panic!("expected vertices")
        };
        assert_eq!(v.len(), 4);
    }

    #[test]
    fn halfplane_is_unbounded() {
        let r = vec![vec![1.0, 0.0], vec![-1.0, 0.0], vec![0.0, 1.0]];
        let b = vec![1.0, 0.0, 1.0];
        assert!(matches!(hrep_to_vertices(&r, &b, 1e-9), VertexEnumeration::Unbounded));
    }

    #[test]
    fn contradictory_rows_are_empty() {
        let r = vec![vec![1.0], vec![-1.0]];
        let b = vec![0.0, -1.0];
        assert!(matches!(hrep_to_vertices(&r, &b, 1e-9), VertexEnumeration::Empty));
    }

    #[test]
    fn cube_facets_have_four_incident_points() {
        let mut pts = Vec::new();
        for i in 0..8 {
            pts.push(vec![(i & 1) as f64, (i >> 1 & 1) as f64, (i >> 2 & 1) as f64]);
        }
        pts.push(vec![0.5, 0.5, 0.5]);
        let f = facets_of_points(&pts, 1e-9).unwrap();
        assert_eq!(f.len(), 6);
        assert!(f.iter().all(|f| f.incident.len() == 4));
    }
}
