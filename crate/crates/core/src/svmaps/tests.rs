use super::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

fn poly(pts: &[[f64; 2]]) -> Polytope {
    let v: Vec<Vec<f64>> = pts.iter().map(|p| p.to_vec()).collect();
    Polytope::from_vrep(&v, &tol()).unwrap()
}

fn close(a: f64, b: f64, eps: f64) {
    assert!((a - b).abs() <= eps, "{a} vs {b}");
}

fn same(a: &Polytope, b: &Polytope, eps: f64) {
    assert_eq!(a.vertices().len(), b.vertices().len(), "{:?} vs {:?}", a.vertices(), b.vertices());
    for (u, v) in a.vertices().iter().zip(b.vertices()) {
        assert!(crate::linalg::dist(u, v) <= eps, "{:?} vs {:?}", a.vertices(), b.vertices());
    }
}

fn toy() -> MapSpec {
    MapSpec::bilevel(BilevelLinearSpec::toy(), &tol()).unwrap()
}

#[test]
fn eval_map_examples() {
    let t = eval_map(&MapSpec::trapezoid(), &[1.0], &tol()).unwrap();
    assert_eq!(t, poly(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]));
    let t0 = eval_map(&MapSpec::trapezoid(), &[0.0], &tol()).unwrap();
    assert_eq!(t0, poly(&[[0.0, 0.0], [1.0, 0.0]]));
    let q = eval_map(&MapSpec::qmap(2.0), &[0.0], &tol()).unwrap();
    assert_eq!(q, poly(&[[0.0, 0.0], [1.0, 0.0]]));
    let r = eval_map(&MapSpec::rotseg(), &[0.0], &tol()).unwrap();
    assert_eq!(r, poly(&[[-2.0, 0.0], [2.0, 0.0]]));
    assert_eq!(eval_map(&MapSpec::trapezoid(), &[1.5], &tol()).unwrap_err(), Error::DomainViolation(vec![1.5]));
}

#[test]
fn qmap_volume_closed_form() {
    for x in [0.1, 0.5, 1.0] {
        for q in [1.0, 1.5, 2.0, 3.0] {
            let p = eval_map(&MapSpec::qmap(q), &[x], &tol()).unwrap();
            close(p.volume(), x + 0.5 * f64::powf(x, q), 1e-14);
        }
    }
}

#[test]
fn spec_validation() {
    assert!(MapSpec::qmap(0.5).validate().is_err());
    let e = MapSpec::eps_argmin(BilevelLinearSpec::toy(), 0.0, &tol());
    assert!(matches!(e, Err(Error::InvalidSpec(_))));
}

#[test]
fn bilevel_toy_fibers() {
    let spec = BilevelLinearSpec::toy();
    for exact in [false, true] {
        for x in [0.0, 0.3, 0.75] {
            let s = bilevel_solution(&spec, &[x], exact, &tol()).unwrap();
            same(&s, &poly(&[[x, 0.0], [1.0, 0.0]]), if exact { 0.0 } else { 1e-12 });
        }
        let s = bilevel_solution(&spec, &[1.0], exact, &tol()).unwrap();
        assert_eq!(s.dim(), 0);
        assert_eq!(s.vertices(), &[vec![1.0, 0.0]]);
        let e = bilevel_solution(&spec, &[1.2], exact, &tol()).unwrap_err();
        assert_eq!(e, Error::ParameterInfeasible(vec![1.2]));
    }
}

#[test]
fn bilevel_zero_objective_gives_fiber() {
    let mut spec = BilevelLinearSpec::toy();
    spec.c = vec![0.0, 0.0];
    let s = bilevel_solution(&spec, &[0.4], true, &tol()).unwrap();
    close(s.volume(), 0.6, 1e-12);
}

#[test]
fn bilevel_spec_checks_boundedness() {
    let t = BilevelLinearSpec::toy();
    let ok = BilevelLinearSpec::new(t.a.clone(), t.b_mat.clone(), t.b.clone(), t.c.clone(), &tol());
    assert!(ok.is_ok());
    // without x >= 0 nothing bounds x from below
    let keep = |v: &Vec<Vec<f64>>| [&v[..5], &v[6..]].concat();
    let b: Vec<f64> = [&t.b[..5], &t.b[6..]].concat();
    let e = BilevelLinearSpec::new(keep(&t.a), keep(&t.b_mat), b, t.c.clone(), &tol());
    assert_eq!(e.unwrap_err(), Error::Unbounded);
    assert_eq!(toy().domain, Domain::Box { lo: vec![0.0], hi: vec![1.0] });
}

#[test]
fn eps_argmin_examples() {
    let spec = BilevelLinearSpec::toy();
    for exact in [false, true] {
        let s = eps_argmin(&spec, 0.1, &[0.0], exact, &tol()).unwrap();
        close(s.volume(), 0.1, 1e-12);
        assert_eq!(s.dim(), 2);
        let s = eps_argmin(&spec, 5.0, &[0.0], exact, &tol()).unwrap();
        close(s.volume(), 1.0, 1e-12);
        let s = eps_argmin(&spec, 0.1, &[1.0], exact, &tol()).unwrap();
        same(&s, &poly(&[[1.0, 0.0], [1.0, 0.1]]), 1e-12);
    }
}

#[test]
fn generic_affine_matches_toy_fibers() {
    // {y : x <= y1 <= 1, 0 <= y2 <= 0}
    let rows = vec![
        AffineRow { a: vec![1.0, 0.0], a_x: vec![], b: 1.0, b_x: vec![] },
        AffineRow { a: vec![-1.0, 0.0], a_x: vec![], b: 0.0, b_x: vec![-1.0] },
        AffineRow { a: vec![0.0, 1.0], a_x: vec![], b: 0.0, b_x: vec![] },
        AffineRow { a: vec![0.0, -1.0], a_x: vec![], b: 0.0, b_x: vec![] },
    ];
    let spec = MapSpec { kind: MapKind::GenericAffine { rows }, domain: Domain::unit_interval(), exact: false };
    let s = eval_map(&spec, &[0.25], &tol()).unwrap();
    same(&s, &poly(&[[0.25, 0.0], [1.0, 0.0]]), 1e-12);
}

#[test]
fn rect_decompose_at_anchor() {
    let spec = toy();
    let d = rect_decompose(&spec, &[0.4], &[0.4], &tol()).unwrap();
    let s = eval_map(&spec, &[0.4], &tol()).unwrap();
    let moved = s.translate(&[-0.7, 0.0]).unwrap();
    same(d.t0.as_ref().unwrap(), &moved, 1e-12);
    same(&d.t1, &moved, 1e-12);
    assert_eq!(d.r1.vertices(), &[vec![0.0, 0.0]]);
    assert!(d.check_sandwich(&s).unwrap().holds);
    assert_eq!(h_ratio(&d).unwrap(), 1.0);
}

#[test]
fn rect_decompose_toy_nearby() {
    let spec = toy();
    for x in [0.35, 0.45, 0.5] {
        let d = rect_decompose(&spec, &[0.4], &[x], &tol()).unwrap();
        assert_eq!(d.t1.dim(), 1);
        assert_eq!(d.t0.as_ref().unwrap().dim(), 1);
        let s = eval_map(&spec, &[x], &tol()).unwrap();
        assert!(d.check_sandwich(&s).unwrap().holds);
        close(h_ratio(&d).unwrap(), 1.0, 1e-12);
    }
}

#[test]
fn rect_decompose_qmap() {
    let spec = MapSpec::qmap(2.0);
    for x in [0.5, 0.1, 0.01] {
        let d = rect_decompose(&spec, &[0.0], &[x], &tol()).unwrap();
        same(&d.t1, &poly(&[[-0.5, 0.0], [0.5, 0.0]]), 1e-12);
        same(&d.r0, &poly(&[[0.0, -x], [0.0, 0.0]]), 1e-15);
        same(&d.r1, &poly(&[[0.0, -x], [0.0, x * x]]), 1e-15);
        let s = eval_map(&spec, &[x], &tol()).unwrap();
        assert!(d.check_sandwich(&s).unwrap().holds);
        // the defining ratio: λ(R1)/λ(R0) = 1 + x^{q−1}
        close(h_ratio(&d).unwrap(), 1.0 + x, 1e-12);
    }
    close(1.0 / h_ratio(&rect_decompose(&spec, &[0.0], &[0.5], &tol()).unwrap()).unwrap(), 2.0 / 3.0, 1e-12);
    // the generic construction degenerates here
    let general = MapSpec { kind: MapKind::QMap { q: 2.0 }, domain: Domain::unit_interval(), exact: false };
    let d = rect_decompose(&general, &[0.0], &[0.0], &tol()).unwrap();
    assert_eq!(h_ratio(&d).unwrap(), 1.0);
}

#[test]
fn steiner_selection_examples() {
    let a = poly(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    let b = poly(&[[2.0, 2.0], [3.0, 2.0], [2.0, 3.0], [3.0, 3.0]]);
    let spec = MapSpec::interp(a.clone(), b.clone());
    let s = steiner_selection(&spec, &points(&[0.0, 1.0]), &tol()).unwrap();
    assert_eq!(s[0], a.steiner_point().unwrap());
    assert_eq!(s[1], b.steiner_point().unwrap());
    let s = steiner_selection(&MapSpec::rotseg(), &points(&[0.0, 0.3, 0.7]), &tol()).unwrap();
    for p in s {
        close(p[0], 0.0, 1e-12);
        close(p[1], 0.0, 1e-12);
    }
    let grid = linspace(0.0, 0.9, 7);
    let s = steiner_selection(&toy(), &points(&grid), &tol()).unwrap();
    for (p, x) in s.iter().zip(&grid) {
        close(p[0], (1.0 + x) / 2.0, 1e-12);
        close(p[1], 0.0, 1e-12);
    }
}

#[test]
fn lipschitz_selection_examples() {
    let grid = points(&linspace(0.0, 0.9, 10));
    let sel = lipschitz_selection(&toy(), &[0.5], &[0.5, 0.0], &grid, 16, &tol()).unwrap();
    assert!(sel.anchor_error < 1e-12);
    close(sel.slack, 1.0 / (std::f64::consts::PI / 16.0).cos(), 1e-15);
    for w in sel.points.windows(2) {
        let slope = crate::linalg::dist(&w[0], &w[1]) / 0.1;
        assert!(slope <= 5.0 * 2.0 * sel.slack, "{slope}");
    }
    // constant map: τ ≡ ȳ
    let k = poly(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]);
    let spec = MapSpec::interp(k.clone(), k);
    let sel = lipschitz_selection(&spec, &[0.0], &[0.2, 0.3], &grid, 8, &tol()).unwrap();
    for p in sel.points {
        close(p[0], 0.2, 1e-12);
        close(p[1], 0.3, 1e-12);
    }
    assert!(lipschitz_selection(&toy(), &[0.5], &[0.0, 0.5], &grid, 16, &tol()).is_err());
}

#[test]
fn frame_selection_examples() {
    let grid = points(&linspace(0.0, 0.9, 10));
    let f = frame_selection(&toy(), &[0.45], &grid, 32, &tol()).unwrap();
    for fr in &f.frames {
        close(fr[0][0], 1.0, 1e-12);
        close(fr[0][1], 0.0, 1e-12);
    }
    let grid = points(&linspace(0.3, 0.7, 9));
    let f = frame_selection(&MapSpec::rotseg(), &[0.5], &grid, 64, &tol()).unwrap();
    for (fr, x) in f.frames.iter().zip(&grid) {
        let (s, c) = (std::f64::consts::PI * x[0]).sin_cos();
        close((fr[0][0] * c + fr[0][1] * s).abs(), 1.0, 1e-9);
        close(crate::linalg::dot(&fr[0], &fr[1]), 0.0, 1e-12);
    }
    let e = frame_selection(&toy(), &[0.5], &points(&[0.5, 1.0]), 32, &tol()).unwrap_err();
    assert_eq!(e, Error::DimensionDrift { from: 1, to: 0 });
}

#[test]
fn dim_profile_examples() {
    assert_eq!(dim_profile(&MapSpec::trapezoid(), &points(&[0.0, 0.5, 1.0]), &tol()).unwrap(), vec![1, 2, 2]);
    assert_eq!(dim_profile(&toy(), &points(&[0.5, 1.0]), &tol()).unwrap(), vec![1, 0]);
    let k = poly(&[[0.0, 0.0], [1.0, 0.0]]);
    assert_eq!(dim_profile(&MapSpec::interp(k.clone(), k), &points(&[0.0, 0.5]), &tol()).unwrap(), vec![1, 1]);
}

#[test]
fn circle_metric() {
    let d = Domain::Circle;
    close(d.dist(&[0.05], &[0.95]), 0.1, 1e-15);
    close(d.dist(&[0.2], &[0.5]), 0.3, 1e-15);
}

#[test]
fn spec_json_roundtrip() {
    for s in [MapSpec::trapezoid(), MapSpec::qmap(1.5), MapSpec::rotseg(), toy()] {
        let j = serde_json::to_string(&s).unwrap();
        let back: MapSpec = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}

#[test]
fn grids() {
    assert_eq!(linspace(0.0, 1.0, 3), vec![0.0, 0.5, 1.0]);
    let g = logspace(1e-6, 1.0, 100);
    assert_eq!(g.len(), 100);
    assert_eq!(g[0], 1e-6);
    assert_eq!(g[99], 1.0);
}
