//! Exact discrete optimal transport between two categorical distributions.
//!
//! The solver runs successive shortest paths on the bipartite transportation
//! network (sources = outcomes of `p`, sinks = outcomes of `q`). Each
//! augmentation follows a cheapest residual path found with Bellman-Ford,
//! so the plan stays optimal for the mass moved so far and is optimal for
//! the full problem on termination. At the sizes used here (k <= 64) that is
//! fast and exact up to floating-point rounding.

use serde::{Deserialize, Serialize};

use crate::attrspace::CategoricalDistribution;
use crate::error::{Error, Result};

/// Residual masses at or below this are treated as exhausted.
const MASS_EPS: f64 = 1e-15;

/// Ground cost `d(i, j)` between outcomes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCost", into = "RawCost")]
pub struct CostMatrix {
    c: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawCost {
    k: usize,
    c: Vec<Vec<f64>>,
}

impl TryFrom<RawCost> for CostMatrix {
    type Error = Error;

    fn try_from(raw: RawCost) -> Result<Self> {
        if raw.c.len() != raw.k {
            return Err(Error::InvalidCost(format!(
                "k={} but matrix has {} rows",
                raw.k,
                raw.c.len()
            )));
        }
        CostMatrix::new(raw.c)
    }
}

impl From<CostMatrix> for RawCost {
    fn from(cost: CostMatrix) -> Self {
        RawCost {
            k: cost.k(),
            c: cost.c,
        }
    }
}

impl CostMatrix {
    /// Square, finite, non-negative, with a zero diagonal.
    pub fn new(c: Vec<Vec<f64>>) -> Result<Self> {
        let k = c.len();
        if k < 2 {
            return Err(Error::InvalidCost(format!("k={k}, need k >= 2")));
        }
        for (i, row) in c.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidCost(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            for (j, &x) in row.iter().enumerate() {
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidCost(format!("c[{i}][{j}] = {x}")));
                }
            }
            if row[i] != 0.0 {
                return Err(Error::InvalidCost(format!("c[{i}][{i}] = {} != 0", row[i])));
            }
        }
        Ok(CostMatrix { c })
    }

    /// Discrete metric scaled by `2/k`. Under this cost the transport value
    /// equals the normalized Manhattan distance `(1/k) * sum |p_i - q_i|`.
    pub fn default_cost(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::param("k", format!("{k} < 2")));
        }
        let off = 2.0 / k as f64;
        Ok(CostMatrix {
            c: (0..k)
                .map(|i| (0..k).map(|j| if i == j { 0.0 } else { off }).collect())
                .collect(),
        })
    }

    /// `|i - j|`, the ground metric of outcomes laid out on a line.
    pub fn line(k: usize) -> Result<Self> {
        CostMatrix::new(
            (0..k)
                .map(|i| (0..k).map(|j| i.abs_diff(j) as f64).collect())
                .collect(),
        )
    }

    pub fn k(&self) -> usize {
        self.c.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.c[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.c
    }
}

/// Optimal coupling `w` and its cost.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportPlan {
    pub w: Vec<Vec<f64>>,
    pub value: f64,
}

impl TransportPlan {
    pub fn row_sums(&self) -> Vec<f64> {
        self.w.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        let k = self.w.len();
        (0..k).map(|j| self.w.iter().map(|r| r[j]).sum()).collect()
    }
}

/// Minimum-cost plan moving `p` onto `q` under `cost`.
pub fn solve(
    p: &CategoricalDistribution,
    q: &CategoricalDistribution,
    cost: &CostMatrix,
) -> Result<TransportPlan> {
    p.check_same_k(q)?;
    let k = p.k();
    if cost.k() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: cost.k(),
        });
    }

    let mut supply = p.probs().to_vec();
    let mut demand = q.probs().to_vec();
    let mut w = vec![vec![0.0; k]; k];

    // Mass that sits on the diagonal never has to move and costs nothing;
    // settling it first keeps the number of augmentations small.
    for i in 0..k {
        let m = supply[i].min(demand[i]);
        w[i][i] = m;
        supply[i] -= m;
        demand[i] -= m;
    }

    // Node layout for the path search: 0..k are sources, k..2k are sinks.
    let n = 2 * k;
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![usize::MAX; n];
    let max_rounds = 4 * k * k + 64;
    let mut rounds = 0;

    while supply.iter().any(|&s| s > MASS_EPS) && demand.iter().any(|&d| d > MASS_EPS) {
        rounds += 1;
        if rounds > max_rounds {
            return Err(Error::SolverStalled(rounds));
        }

        dist.fill(f64::INFINITY);
        pred.fill(usize::MAX);
        for i in 0..k {
            if supply[i] > MASS_EPS {
                dist[i] = 0.0;
            }
        }
        // Bellman-Ford over the residual graph. Forward arcs i -> j are
        // uncapacitated; backward arcs j -> i exist where w[i][j] > 0.
        for _ in 0..n {
            let mut changed = false;
            for i in 0..k {
                if dist[i].is_finite() {
                    for j in 0..k {
                        let nd = dist[i] + cost.c[i][j];
                        if nd < dist[k + j] - 1e-15 {
                            dist[k + j] = nd;
                            pred[k + j] = i;
                            changed = true;
                        }
                    }
                }
            }
            for j in 0..k {
                if dist[k + j].is_finite() {
                    for i in 0..k {
                        if w[i][j] > MASS_EPS {
                            let nd = dist[k + j] - cost.c[i][j];
                            if nd < dist[i] - 1e-15 {
                                dist[i] = nd;
                                pred[i] = k + j;
                                changed = true;
                            }
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let sink = (0..k)
            .filter(|&j| demand[j] > MASS_EPS && dist[k + j].is_finite())
            .min_by(|&a, &b| dist[k + a].total_cmp(&dist[k + b]))
            .ok_or(Error::SolverStalled(rounds))?;

        // Walk back to the originating source collecting the bottleneck.
        let mut amount = demand[sink];
        let mut node = k + sink;
        let mut path = Vec::with_capacity(n);
        loop {
            let prev = pred[node];
            if prev == usize::MAX {
                break;
            }
            if path.len() > n {
                return Err(Error::SolverStalled(rounds));
            }
            if node < k {
                // reached a source through a backward arc from sink `prev - k`
                amount = amount.min(w[node][prev - k]);
            }
            path.push((prev, node));
            node = prev;
        }
        amount = amount.min(supply[node]);
        if amount <= 0.0 {
            return Err(Error::SolverStalled(rounds));
        }

        supply[node] -= amount;
        demand[sink] -= amount;
        for (from, to) in path {
            if from < k {
                w[from][to - k] += amount;
            } else {
                w[to][from - k] -= amount;
            }
        }
    }

    for row in &mut w {
        for x in row.iter_mut() {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
    }
    let value = w
        .iter()
        .zip(&cost.c)
        .map(|(wr, cr)| wr.iter().zip(cr).map(|(a, b)| a * b).sum::<f64>())
        .sum();
    Ok(TransportPlan { w, value })
}
