use super::*;
use crate::Tolerances;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn poly(pts: &[&[f64]]) -> Polytope {
    let v: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
    Polytope::from_vrep(&v, &tol()).unwrap()
}

fn square(lo: f64, hi: f64) -> Polytope {
    poly(&[&[lo, lo], &[hi, lo], &[lo, hi], &[hi, hi]])
}

fn trapezoid(x: f64) -> Polytope {
    poly(&[&[0.0, 0.0], &[1.0, 0.0], &[1.0, x], &[x.powf(0.25), x]])
}

fn y(i: usize) -> Integrand {
    Integrand::polynomial(Polynomial::var(2, i))
}

fn close(a: f64, b: f64, eps: f64) {
    assert!((a - b).abs() <= eps, "{a} vs {b}");
}

#[test]
fn expect_neutral_examples() {
    close(expect_neutral(&trapezoid(1.0 / 16.0), &y(0), &tol()).unwrap().value, 11.0 / 18.0, 1e-14);
    for p in [square(0.0, 1.0), trapezoid(0.3), poly(&[&[1.0, 2.0]]), poly(&[&[0.0, 0.0], &[2.0, 1.0]])] {
        close(expect_neutral(&p, &Integrand::constant(2, 1.0), &tol()).unwrap().value, 1.0, 1e-15);
    }
    let q = poly(&[&[0.0, -1.0], &[1.0, -1.0], &[1.0, 1.0], &[0.0, 0.0]]);
    close(expect_neutral(&q, &y(0), &tol()).unwrap().value, 5.0 / 9.0, 1e-14);
    // dim 0 evaluates at the vertex
    let pt = poly(&[&[0.25, 3.0]]);
    close(expect_neutral(&pt, &y(1), &tol()).unwrap().value, 3.0, 0.0);
}

#[test]
fn degree_cap_enforced() {
    let p = Polynomial::new(2, vec![Term { exps: vec![5, 4], coef: 1.0 }]).unwrap();
    let e = expect_neutral(&square(0.0, 1.0), &Integrand::polynomial(p), &tol()).unwrap_err();
    assert_eq!(e, Error::DegreeCapExceeded { degree: 9, cap: 8 });
}

#[test]
fn monomials_on_unit_square() {
    // E[y1^a y2^b] = 1/((a+1)(b+1))
    for a in 0..=4u32 {
        for b in 0..=(8 - a).min(4) {
            let f = Integrand::polynomial(Polynomial::new(2, vec![Term { exps: vec![a, b], coef: 1.0 }]).unwrap());
            let v = expect_neutral(&square(0.0, 1.0), &f, &tol()).unwrap().value;
            close(v, 1.0 / ((a + 1) * (b + 1)) as f64, 1e-13);
        }
    }
}

#[test]
fn expect_density_examples() {
    let p = trapezoid(0.2);
    let one = Integrand::constant(2, 1.0);
    let n = expect_neutral(&p, &y(0), &tol()).unwrap().value;
    close(expect_density(&p, &one, &y(0), &tol()).unwrap().value, n, 1e-12);
    close(expect_density(&p, &Integrand::constant(2, 2.0), &y(0), &tol()).unwrap().value, n, 1e-12);
    let seg = Polytope::from_vrep(&[vec![0.0], vec![1.0]], &tol()).unwrap();
    let h = Integrand::polynomial(Polynomial::affine(&[1.0], 1.0));
    let f = Integrand::polynomial(Polynomial::var(1, 0));
    close(expect_density(&seg, &h, &f, &tol()).unwrap().value, 5.0 / 9.0, 1e-14);
    let bad = Integrand::polynomial(Polynomial::affine(&[1.0], -0.5));
    assert!(matches!(expect_density(&seg, &bad, &f, &tol()), Err(Error::PositivityViolation { .. })));
}

#[test]
fn opaque_integrand_uses_monte_carlo() {
    let f = Integrand::opaque(|y| y[0]);
    let e = expect_neutral(&trapezoid(1.0 / 16.0), &f, &tol()).unwrap();
    assert!(e.std_error > 0.0);
    assert!((e.value - 11.0 / 18.0).abs() < 4.0 * e.std_error);
}

#[test]
fn sampling_examples() {
    let pts = sample_uniform(&square(0.0, 1.0), 100_000, 1).unwrap();
    let mean = crate::linalg::mean(&pts);
    close(mean[0], 0.5, 0.01);
    close(mean[1], 0.5, 0.01);
    let left = pts.iter().filter(|p| p[0] < 0.5).count() as f64 / pts.len() as f64;
    close(left, 0.5, 0.01);
    let pts = sample_uniform(&trapezoid(1.0 / 16.0), 100_000, 2).unwrap();
    close(crate::linalg::mean(&pts)[0], 11.0 / 18.0, 0.01);
    assert_eq!(sample_uniform(&square(0.0, 1.0), 10, 9).unwrap(), sample_uniform(&square(0.0, 1.0), 10, 9).unwrap());
}

#[test]
fn hit_and_run_in_four_dimensions() {
    let cube: Vec<Vec<f64>> = (0..16).map(|i| (0..4).map(|j| ((i >> j) & 1) as f64).collect()).collect();
    let p = Polytope::from_vrep(&cube, &tol()).unwrap();
    let pts = sample_uniform(&p, 20_000, 3).unwrap();
    assert!(pts.iter().all(|y| p.contains(y, 1e-9)));
    for c in crate::linalg::mean(&pts) {
        close(c, 0.5, 0.02);
    }
}

#[test]
fn tv_examples() {
    let p = trapezoid(0.5);
    close(tv_distance(&MeasurePair::new(p.clone(), p).unwrap()).unwrap(), 0.0, 1e-12);
    let a = Polytope::from_vrep(&[vec![0.0], vec![1.0]], &tol()).unwrap();
    let b = Polytope::from_vrep(&[vec![0.5], vec![1.5]], &tol()).unwrap();
    close(tv_distance(&MeasurePair::new(a, b).unwrap()).unwrap(), 1.0, 1e-12);
    let seg = poly(&[&[0.0, 0.0], &[1.0, 0.0]]);
    let pair = MeasurePair::new(seg, square(0.0, 1.0)).unwrap();
    assert!(!pair.common_hull);
    assert_eq!(tv_distance(&pair).unwrap(), 2.0);
}

#[test]
fn w1_examples() {
    let a = Polytope::from_vrep(&[vec![0.0], vec![1.0]], &tol()).unwrap();
    for s in [-0.7, 0.0, 0.3, 2.5] {
        let b = Polytope::from_vrep(&[vec![s], vec![1.0 + s]], &tol()).unwrap();
        let w = w1_distance(&MeasurePair::new(a.clone(), b).unwrap(), 0.1).unwrap();
        close(w.value, f64::abs(s), 1e-12);
        assert_eq!(w.error_bound, 0.0);
    }
    for (x, xp) in [(0.0, 0.5), (0.2, 0.9), (0.9, 0.1)] {
        let p = poly(&[&[x, 0.0], &[1.0, 0.0]]);
        let q = poly(&[&[xp, 0.0], &[1.0, 0.0]]);
        let w = w1_distance(&MeasurePair::new(p, q).unwrap(), 0.1).unwrap();
        close(w.value, f64::abs(x - xp) / 2.0, 1e-12);
    }
    let sq = square(0.0, 1.0);
    let w = w1_distance(&MeasurePair::new(sq.clone(), sq).unwrap(), 0.25).unwrap();
    close(w.value, 0.0, 1e-12);
}

#[test]
fn w1_grid_respects_error_bound() {
    let p = square(0.0, 1.0);
    let q = p.translate(&[0.3, 0.1]).unwrap();
    let w = w1_distance(&MeasurePair::new(p, q).unwrap(), 0.1).unwrap();
    let exact = (0.3f64 * 0.3 + 0.1 * 0.1).sqrt();
    assert!((w.value - exact).abs() <= w.error_bound, "{w:?}");
    assert!((w.value - exact).abs() < 0.02, "{w:?}");
}

#[test]
fn w1_too_coarse() {
    let p = square(0.0, 1.0);
    let e = w1_distance(&MeasurePair::new(p.clone(), p).unwrap(), 10.0).unwrap_err();
    assert_eq!(e, Error::ResolutionTooCoarse { cells: 1 });
}

#[test]
fn w1_tv_examples() {
    let p = trapezoid(0.5);
    let r = w1_tv_inequality_check(&MeasurePair::new(p.clone(), p).unwrap(), 2.0, 0.1).unwrap();
    close(r.w1, 0.0, 1e-12);
    close(r.rhs, 0.0, 1e-12);
    assert!(r.pass);
    let seg = |a: f64, b: f64| Polytope::from_vrep(&[vec![a], vec![b]], &tol()).unwrap();
    let r = w1_tv_inequality_check(&MeasurePair::new(seg(0.0, 1.0), seg(0.5, 1.5)).unwrap(), 1.5, 0.1).unwrap();
    close(r.w1, 0.5, 1e-12);
    close(r.rhs, 0.75, 1e-12);
    assert!(r.pass);
    let r = w1_tv_inequality_check(&MeasurePair::new(seg(0.0, 1.0), seg(2.0, 3.0)).unwrap(), 3.0, 0.1).unwrap();
    close(r.w1, 2.0, 1e-12);
    close(r.tv, 2.0, 1e-12);
    close(r.rhs, 3.0, 1e-12);
    assert!(r.pass);
}

#[test]
fn belief_serde() {
    let b = Belief::WithDensity { h: Integrand::constant(2, 1.0) };
    let s = serde_json::to_string(&b).unwrap();
    let back: Belief = serde_json::from_str(&s).unwrap();
    assert!(matches!(back, Belief::WithDensity { .. }));
    let n: Belief = serde_json::from_str(r#"{"kind":"neutral"}"#).unwrap();
    assert!(matches!(n, Belief::Neutral));
}
