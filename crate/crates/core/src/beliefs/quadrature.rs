//! Grundmann–Möller rules on simplices.

/// Barycentric nodes and weights (summing to 1) of the Grundmann–Möller rule
/// of degree `2s+1` on an `n`-simplex.
pub(crate) fn grundmann_moller(n: usize, s: usize) -> Vec<(Vec<f64>, f64)> {
    let d = 2 * s + 1;
    let mut out = Vec::new();
    for i in 0..=s {
        let denom = (d + n - 2 * i) as f64;
        let w = (-1f64).powi(i as i32) * 0.25f64.powi(s as i32) * denom.powi(d as i32)
            / (factorial(i) * factorial(d + n - i));
        for beta in compositions(s - i, n + 1) {
            let bary = beta.iter().map(|&b| (2 * b + 1) as f64 / denom).collect();
            out.push((bary, w));
        }
    }
    let total: f64 = out.iter().map(|(_, w)| w).sum();
    for (_, w) in &mut out {
        *w /= total;
    }
    out
}

/// Smallest index `s` whose rule integrates degree `deg` exactly.
pub(crate) fn index_for_degree(deg: u32) -> usize {
    (deg as usize).saturating_sub(1).div_ceil(2)
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// All `parts`-tuples of nonnegative integers summing to `total`.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}
