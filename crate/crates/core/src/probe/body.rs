use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geomkernel::{jung_radius_bound, lebesgue_lipschitz_constant, Polytope};
use crate::linalg;
use crate::{Error, Result, Tolerances};

/// Outcome of one property over all sampled pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyCheck {
    pub name: String,
    pub violations: usize,
    /// Smallest `rhs − lhs` seen (before the allowed slack).
    pub worst_margin: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyReport {
    pub samples: usize,
    pub dim: usize,
    pub seed: u64,
    pub checks: Vec<BodyCheck>,
    pub pass: bool,
}

const NAMES: [&str; 9] = [
    "hausdorff_symmetry",
    "hausdorff_triangle",
    "geodesic",
    "diameter_2_lipschitz",
    "volume_le_symmetric_difference",
    "volume_lipschitz",
    "jung_radius",
    "steiner_relative_interior",
    "steiner_m_lipschitz",
];

/// Randomized property suite over `samples` pairs of polytopes in `[0,1]^m`:
/// Hausdorff metric axioms, geodesic interpolation, the 2-Lipschitz diameter,
/// the volume bound `|λ(A) − λ(B)| <= λ(AΔB) <= L_{Y,m} d_H(A, B)`, Jung's
/// radius bound and the Steiner point selection. With `adversarial` every
/// other pair is a thin sliver.
pub fn verify_body_lemmas(samples: usize, m: usize, seed: u64, adversarial: bool, tol: &Tolerances) -> Result<BodyReport> {
    if samples == 0 || m == 0 {
        return Err(Error::InvalidSpec("samples and dimension must be positive".into()));
    }
    let l = lebesgue_lipschitz_constant((m as f64).sqrt(), m);
    // planar Steiner points are exact; the sphere rule is accurate to O(nodes^{-1/2})
    let steiner_tol = if m <= 2 { 1e-9 } else { 10.0 / (tol.sphere_nodes as f64).sqrt() };
    let slacks = [1e-9, 1e-9, 1e-9, 1e-9, 1e-9, 1e-7, 1e-9, 0.0, steiner_tol];
    let margins = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            let thin = adversarial && i % 2 == 1;
            let a = random_body(&mut rng, m, thin, tol)?;
            let b = random_body(&mut rng, m, thin, tol)?;
            let c = random_body(&mut rng, m, false, tol)?;
            pair_margins(&a, &b, &c, l, &mut rng)
        })
        .collect::<Result<Vec<_>>>()?;
    let checks: Vec<BodyCheck> = NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let col = margins.iter().map(|row| row[k]);
            BodyCheck {
                name: name.to_string(),
                violations: col.clone().filter(|&v| v < -slacks[k]).count(),
                worst_margin: col.fold(f64::INFINITY, f64::min),
                slack: slacks[k],
            }
        })
        .collect();
    let pass = checks.iter().all(|c| c.violations == 0);
    Ok(BodyReport { samples, dim: m, seed, checks, pass })
}

/// Full-dimensional hull of 3 to 8 uniform points in the unit cube, or a
/// sliver of width about 1e-4 around a random segment.
fn random_body(rng: &mut ChaCha8Rng, m: usize, thin: bool, tol: &Tolerances) -> Result<Polytope> {
    loop {
        let pts: Vec<Vec<f64>> = if thin {
            let p: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            let q: Vec<f64> = (0..m).map(|_| rng.random::<f64>()).collect();
            (0..m + 2)
                .map(|_| {
                    let t = rng.random::<f64>();
                    (0..m).map(|j| ((1.0 - t) * p[j] + t * q[j] + 1e-4 * (rng.random::<f64>() - 0.5)).clamp(0.0, 1.0)).collect()
                })
                .collect()
        } else {
            let n = rng.random_range(m + 1..=m + 6);
            (0..n).map(|_| (0..m).map(|_| rng.random::<f64>()).collect()).collect()
        };
        match Polytope::from_vrep(&pts, tol) {
            Ok(p) if p.dim() == m => return Ok(p),
            Ok(_) | Err(Error::NumericalRankAmbiguity { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

fn pair_margins(a: &Polytope, b: &Polytope, c: &Polytope, l: f64, rng: &mut ChaCha8Rng) -> Result<[f64; 9]> {
    let m = a.ambient_dim() as f64;
    let dab = a.hausdorff(b)?;
    let dba = b.hausdorff(a)?;
    let symmetry = -(dab - dba).abs();
    let triangle = dab + b.hausdorff(c)? - a.hausdorff(c)?;

    let (mut t, mut s) = (rng.random::<f64>(), rng.random::<f64>());
    if t > s {
        std::mem::swap(&mut t, &mut s);
    }
    let gt = a.minkowski_interpolate(b, t)?;
    let gs = a.minkowski_interpolate(b, s)?;
    let geodesic = (s - t) * dab - gt.hausdorff(&gs)?;

    let diameter = 2.0 * dab - (a.diameter() - b.diameter()).abs();

    let sym = a.sym_diff_volume(b)?;
    let vol_sym = sym - (a.volume() - b.volume()).abs();
    let vol_lip = l * dab - sym;

    let (_, r) = a.enclosing_ball();
    let jung = jung_radius_bound(a.diameter(), a.ambient_dim()) - r;

    let sa = a.steiner_point()?;
    let sb = b.steiner_point()?;
    let ri = if a.in_relative_interior(&sa) && b.in_relative_interior(&sb) { 0.0 } else { -1.0 };
    let steiner = m * dab - linalg::dist(&sa, &sb);

    Ok([symmetry, triangle, geodesic, diameter, vol_sym, vol_lip, jung, ri, steiner])
}
