use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::geomkernel::Polytope;
use crate::linalg::dot;
use crate::{Error, Result};

const MIN_ACCEPTANCE: f64 = 1e-6;

/// `n` approximately uniform points of `P` (ambient coordinates).
///
/// Rejection from the frame bounding box for `dim(P) <= 3`, hit-and-run
/// otherwise. Deterministic for a fixed seed.
pub fn sample_uniform(p: &Polytope, n: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n == 0 {
        return Err(Error::InvalidSpec("sample count must be positive".into()));
    }
    let k = p.dim();
    if k == 0 {
        return Ok(vec![p.vertices()[0].clone(); n]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let local = if k <= 3 { rejection(p, n, &mut rng)? } else { hit_and_run(p, n, &mut rng) };
    Ok(local.iter().map(|t| p.frame().to_ambient(t)).collect())
}

fn inside(p: &Polytope, t: &[f64]) -> bool {
    p.local_facets().iter().all(|f| dot(&f.normal, t) <= f.offset)
}

fn rejection(p: &Polytope, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Vec<f64>>> {
    let k = p.dim();
    let lv = p.local_vertices();
    let lo: Vec<f64> = (0..k).map(|j| lv.iter().map(|v| v[j]).fold(f64::INFINITY, f64::min)).collect();
    let hi: Vec<f64> = (0..k).map(|j| lv.iter().map(|v| v[j]).fold(f64::NEG_INFINITY, f64::max)).collect();
    let mut out = Vec::with_capacity(n);
    let mut tries: u64 = 0;
    while out.len() < n {
        tries += 1;
        let t: Vec<f64> = (0..k).map(|j| lo[j] + (hi[j] - lo[j]) * rng.random::<f64>()).collect();
        if inside(p, &t) {
            out.push(t);
        }
        if tries >= 1_000_000 && (out.len() as f64) < MIN_ACCEPTANCE * tries as f64 {
            return Err(Error::RejectionBudgetExceeded { rate: out.len() as f64 / tries as f64 });
        }
    }
    Ok(out)
}

fn hit_and_run(p: &Polytope, n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let k = p.dim();
    let lv = p.local_vertices();
    let mut t = crate::linalg::mean(lv);
    let burn = 100 * k;
    let thin = k;
    let mut out = Vec::with_capacity(n);
    let mut step = 0usize;
    while out.len() < n {
        let d: Vec<f64> = (0..k).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for f in p.local_facets() {
            let a = dot(&f.normal, &d);
            let slack = f.offset - dot(&f.normal, &t);
            if a > 0.0 {
                hi = hi.min(slack / a);
            } else if a < 0.0 {
                lo = lo.max(slack / a);
            }
        }
        let s = lo + (hi - lo) * rng.random::<f64>();
        crate::linalg::axpy(&mut t, s, &d);
        step += 1;
        if step > burn && (step - burn) % thin == 0 {
            out.push(t.clone());
        }
    }
    out
}
