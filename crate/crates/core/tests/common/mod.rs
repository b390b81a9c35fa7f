#![allow(dead_code)]

/// Exact optimal transport by enumerating every integer plan with the given
/// row and column unit counts. Integer margins have an integral optimal
/// vertex, so the minimum over integer plans is the true optimum.
pub fn brute_force_transport(a: &[u32], b: &[u32], cost: &[Vec<f64>], denom: u32) -> f64 {
    assert_eq!(a.iter().sum::<u32>(), b.iter().sum::<u32>());
    let k = a.len();
    let mut rows = a.to_vec();
    let mut cols = b.to_vec();
    let mut best = f64::INFINITY;
    fill(0, k, &mut rows, &mut cols, cost, 0.0, &mut best);
    best / f64::from(denom)
}

fn fill(
    cell: usize,
    k: usize,
    rows: &mut [u32],
    cols: &mut [u32],
    cost: &[Vec<f64>],
    acc: f64,
    best: &mut f64,
) {
    if cell == k * k {
        if rows.iter().all(|&r| r == 0) && cols.iter().all(|&c| c == 0) {
            *best = best.min(acc);
        }
        return;
    }
    let (i, j) = (cell / k, cell % k);
    // Last cell in a row must take the row's remainder.
    let (lo, hi) = if j == k - 1 {
        (rows[i], rows[i])
    } else {
        (0, rows[i].min(cols[j]))
    };
    if lo > cols[j] {
        return;
    }
    for units in lo..=hi {
        rows[i] -= units;
        cols[j] -= units;
        fill(
            cell + 1,
            k,
            rows,
            cols,
            cost,
            acc + cost[i][j] * f64::from(units),
            best,
        );
        rows[i] += units;
        cols[j] += units;
    }
}

/// Splits `total` units into `k` non-negative parts from uniform cut points.
pub fn random_composition(rng: &mut impl rand::Rng, total: u32, k: usize) -> Vec<u32> {
    let mut cuts: Vec<u32> = (0..k - 1).map(|_| rng.gen_range(0..=total)).collect();
    cuts.sort_unstable();
    let mut out = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts {
        out.push(c - prev);
        prev = c;
    }
    out.push(total - prev);
    out
}

/// A random point on the probability simplex (normalized exponentials).
pub fn random_simplex(rng: &mut impl rand::Rng, k: usize) -> Vec<f64> {
    let x: Vec<f64> = (0..k).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
    let s: f64 = x.iter().sum();
    x.into_iter().map(|v| v / s).collect()
}
