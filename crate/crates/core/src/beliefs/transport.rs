//! Transportation simplex for the discrete optimal-transport problem.

use crate::{Error, Result};

/// Dantzig pricing for this many pivots, Bland's rule afterwards.
const DANTZIG_PIVOTS: usize = 20_000;
const MAX_PIVOTS: usize = 2_000_000;

/// Minimum of `Σ c_ij x_ij` over couplings of `supply` and `demand` (both
/// normalised to unit mass).
pub(crate) fn transport(supply: &[f64], demand: &[f64], cost: &[Vec<f64>]) -> Result<f64> {
    let (n, m) = (supply.len(), demand.len());
    let sa: f64 = supply.iter().sum();
    let sb: f64 = demand.iter().sum();
    let mut a: Vec<f64> = supply.iter().map(|v| v / sa).collect();
    let mut b: Vec<f64> = demand.iter().map(|v| v / sb).collect();

    // northwest corner
    let mut cells: Vec<(usize, usize)> = Vec::with_capacity(n + m - 1);
    let mut flow: Vec<f64> = Vec::with_capacity(n + m - 1);
    let (mut i, mut j) = (0, 0);
    loop {
        let take = a[i].min(b[j]);
        let row_done = a[i] <= b[j];
        a[i] -= take;
        b[j] -= take;
        cells.push((i, j));
        flow.push(take);
        if i == n - 1 && j == m - 1 {
            break;
        }
        if (row_done && i < n - 1) || j == m - 1 {
            i += 1;
        } else {
            j += 1;
        }
    }

    let cmax = cost.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    let eps = 1e-12 * cmax.max(1e-300);
    let mut u = vec![0.0; n];
    let mut v = vec![0.0; m];
    for pivot in 0..MAX_PIVOTS {
        let adj = adjacency(&cells, n, m);
        potentials(&cells, &adj, cost, &mut u, &mut v, n);

        let mut enter: Option<(usize, usize)> = None;
        let mut best = -eps;
        'price: for (r, row) in cost.iter().enumerate() {
            for (c, &crc) in row.iter().enumerate() {
                let red = crc - u[r] - v[c];
                if red < best {
                    enter = Some((r, c));
                    if pivot >= DANTZIG_PIVOTS {
                        break 'price;
                    }
                    best = red;
                }
            }
        }
        let Some((ei, ej)) = enter else {
            return Ok(cells.iter().zip(&flow).map(|(&(r, c), x)| cost[r][c] * x).sum());
        };

        let path = tree_path(&cells, &adj, n + ej, ei, n);
        // path runs from row ei to column ej; its cells alternate −, +, −, ...
        let mut leave = path[0];
        for &e in path.iter().step_by(2) {
            if flow[e] < flow[leave] || (flow[e] == flow[leave] && cells[e] < cells[leave]) {
                leave = e;
            }
        }
        let theta = flow[leave];
        for (k, &e) in path.iter().enumerate() {
            if k % 2 == 0 {
                flow[e] -= theta;
            } else {
                flow[e] += theta;
            }
        }
        cells[leave] = (ei, ej);
        flow[leave] = theta;
    }
    Err(Error::SolverStall { iterations: MAX_PIVOTS })
}

/// Basis cells incident to each node (rows `0..n`, columns `n..n+m`).
fn adjacency(cells: &[(usize, usize)], n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n + m];
    for (e, &(r, c)) in cells.iter().enumerate() {
        adj[r].push(e);
        adj[n + c].push(e);
    }
    adj
}

fn other_end(cell: (usize, usize), node: usize, n: usize) -> usize {
    if node < n {
        n + cell.1
    } else {
        cell.0
    }
}

fn potentials(cells: &[(usize, usize)], adj: &[Vec<usize>], cost: &[Vec<f64>], u: &mut [f64], v: &mut [f64], n: usize) {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    u[0] = 0.0;
    while let Some(node) = stack.pop() {
        for &e in &adj[node] {
            let (r, c) = cells[e];
            let next = other_end(cells[e], node, n);
            if seen[next] {
                continue;
            }
            seen[next] = true;
            if next < n {
                u[r] = cost[r][c] - v[c];
            } else {
                v[c] = cost[r][c] - u[r];
            }
            stack.push(next);
        }
    }
}

/// Basis cells on the tree path from `to` back to `from`, listed starting at
/// `to`.
fn tree_path(cells: &[(usize, usize)], adj: &[Vec<usize>], from: usize, to: usize, rows: usize) -> Vec<usize> {
    let nodes = adj.len();
    let mut parent: Vec<Option<usize>> = vec![None; nodes];
    let mut seen = vec![false; nodes];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(node) = stack.pop() {
        if node == to {
            break;
        }
        for &e in &adj[node] {
            let next = other_end(cells[e], node, rows);
            if !seen[next] {
                seen[next] = true;
                parent[next] = Some(e);
                stack.push(next);
            }
        }
    }
    let mut path = Vec::new();
    let mut node = to;
    while node != from {
        let e = parent[node].expect("basis is a spanning tree");
        path.push(e);
        node = other_end(cells[e], node, rows);
    }
    path
}
