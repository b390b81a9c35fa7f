mod common;

use common::{brute_force_transport, random_composition};
use fairdisc::transport::solve;
use fairdisc::{CategoricalDistribution, CostMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dist(units: &[u32], denom: u32) -> CategoricalDistribution {
    CategoricalDistribution::new(
        units
            .iter()
            .map(|&u| f64::from(u) / f64::from(denom))
            .collect(),
    )
    .unwrap()
}

#[test]
fn solver_matches_enumeration_on_random_rational_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11);
    for case in 0..300 {
        let k = rng.gen_range(2..=4);
        let denom = rng.gen_range(1..=12);
        let a = random_composition(&mut rng, denom, k);
        let b = random_composition(&mut rng, denom, k);
        let cost: Vec<Vec<f64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { 0.0 } else { rng.gen_range(0.0..5.0) })
                    .collect()
            })
            .collect();
        let expected = brute_force_transport(&a, &b, &cost, denom);
        let plan = solve(
            &dist(&a, denom),
            &dist(&b, denom),
            &CostMatrix::new(cost).unwrap(),
        )
        .unwrap();
        assert!(
            (plan.value - expected).abs() <= 1e-9,
            "case {case}: k={k} a={a:?} b={b:?} solver={} brute={expected}",
            plan.value
        );
    }
}

#[test]
fn plan_has_requested_marginals() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let k = rng.gen_range(2..=6);
        let a = random_composition(&mut rng, 60, k);
        let b = random_composition(&mut rng, 60, k);
        let (p, q) = (dist(&a, 60), dist(&b, 60));
        let plan = solve(&p, &q, &CostMatrix::line(k).unwrap()).unwrap();
        for (x, y) in plan.row_sums().iter().zip(p.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in plan.col_sums().iter().zip(q.probs()) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(plan.w.iter().flatten().all(|&v| v >= 0.0));
    }
}

#[test]
fn line_cost_matches_cumulative_distribution_formula() {
    // On a line with unit spacing, W1 = sum of |CDF differences|.
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..200 {
        let k = rng.gen_range(2..=10);
        let p = common::random_simplex(&mut rng, k);
        let q = common::random_simplex(&mut rng, k);
        let mut cp = 0.0;
        let mut cq = 0.0;
        let mut expected = 0.0;
        for i in 0..k - 1 {
            cp += p[i];
            cq += q[i];
            expected += (cp - cq).abs();
        }
        let got = solve(
            &CategoricalDistribution::new(p).unwrap(),
            &CategoricalDistribution::new(q).unwrap(),
            &CostMatrix::line(k).unwrap(),
        )
        .unwrap()
        .value;
        assert!((got - expected).abs() < 1e-9, "{got} vs {expected}");
    }
}
