//! Discrepancy measures between a classifier-estimated attribute distribution
//! and the uniform reference, plus their normalization to `[0, 1]`.
//!
//! Amorphic measures compare the two vectors point by point (L1, L2, WD).
//! Specificity is morphic: it only looks at the sorted shape of each
//! distribution. Information specificity mixes L1 with specificity.
//!
//! A raw score is divided by its normalization factor, the raw value at an
//! absolutely biased extreme point. Normalized scores are therefore 0 at the
//! uniform distribution and 1 at every one-hot distribution, for every `k`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::attrspace::CategoricalDistribution;
use crate::error::{Error, Result};
use crate::transport::{self, CostMatrix};

/// Default mixing weight of information specificity.
pub const DEFAULT_IS_ALPHA: f64 = 0.5;

/// Normalized scores below this are reported as exactly zero; they are
/// floating-point residue of computing a uniform distribution.
pub const ZERO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricId {
    #[serde(rename = "l1")]
    L1,
    #[serde(rename = "l2")]
    L2,
    #[serde(rename = "wd")]
    Wd,
    #[serde(rename = "spec")]
    Specificity,
    #[serde(rename = "is")]
    InfoSpecificity,
}

impl MetricId {
    pub const ALL: [MetricId; 5] = [
        MetricId::L1,
        MetricId::L2,
        MetricId::Wd,
        MetricId::Specificity,
        MetricId::InfoSpecificity,
    ];

    /// Short name used on the command line and in CSV output.
    pub fn name(self) -> &'static str {
        match self {
            MetricId::L1 => "l1",
            MetricId::L2 => "l2",
            MetricId::Wd => "wd",
            MetricId::Specificity => "spec",
            MetricId::InfoSpecificity => "is",
        }
    }

    /// Column header for tables.
    pub fn title(self) -> &'static str {
        match self {
            MetricId::L1 => "L1",
            MetricId::L2 => "L2",
            MetricId::Wd => "WD",
            MetricId::Specificity => "Specificity",
            MetricId::InfoSpecificity => "IS",
        }
    }

    /// Parses a comma-separated list; `all` expands to every metric.
    pub fn parse_list(s: &str) -> Result<Vec<MetricId>> {
        let mut out: Vec<MetricId> = Vec::new();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            if part.eq_ignore_ascii_case("all") {
                for m in MetricId::ALL {
                    if !out.contains(&m) {
                        out.push(m);
                    }
                }
            } else {
                let m = part.parse()?;
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        if out.is_empty() {
            return Err(Error::Empty("metric list"));
        }
        Ok(out)
    }
}

impl fmt::Display for MetricId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(MetricId::L1),
            "l2" => Ok(MetricId::L2),
            "wd" => Ok(MetricId::Wd),
            "spec" | "specificity" => Ok(MetricId::Specificity),
            "is" => Ok(MetricId::InfoSpecificity),
            other => Err(Error::param(
                "metric",
                format!("unknown metric `{other}` (expected l1, l2, wd, spec, is, all)"),
            )),
        }
    }
}

/// `(1/k) * sum |p_i - q_i|`
pub fn l1(p: &CategoricalDistribution, q: &CategoricalDistribution) -> Result<f64> {
    p.check_same_k(q)?;
    let s: f64 = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a - b).abs())
        .sum();
    Ok(s / p.k() as f64)
}

/// `(1/k) * sqrt(sum (p_i - q_i)^2)`
pub fn l2(p: &CategoricalDistribution, q: &CategoricalDistribution) -> Result<f64> {
    p.check_same_k(q)?;
    let s: f64 = p
        .probs()
        .iter()
        .zip(q.probs())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    Ok(s.sqrt() / p.k() as f64)
}

/// Weights applied to the 2nd..k-th largest entries by [`specificity`].
///
/// Proportional to `k - j` for rank `j`, scaled to sum to one so that the
/// uniform distribution has specificity zero. For `k = 2` the single weight
/// is 1. Entry `0` of the result is the weight of rank 2.
pub fn specificity_weights(k: usize) -> Vec<f64> {
    if k <= 2 {
        return vec![1.0; k.saturating_sub(1)];
    }
    let total: usize = (2..=k).map(|j| k - j).sum();
    (2..=k).map(|j| (k - j) as f64 / total as f64).collect()
}

/// `p_(1) - sum_{j>=2} alpha_j * p_(j)` over the entries sorted descending.
pub fn specificity(p: &CategoricalDistribution) -> f64 {
    let mut sorted = p.probs().to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let weights = specificity_weights(p.k());
    sorted[0]
        - weights
            .iter()
            .zip(&sorted[1..])
            .map(|(a, x)| a * x)
            .sum::<f64>()
}

/// `|sp(p) - sp(q)|`
pub fn delta_specificity(p: &CategoricalDistribution, q: &CategoricalDistribution) -> Result<f64> {
    p.check_same_k(q)?;
    Ok((specificity(p) - specificity(q)).abs())
}

/// `alpha * L1(p, q) + (1 - alpha) * |sp(p) - sp(q)|`
pub fn info_specificity(
    p: &CategoricalDistribution,
    q: &CategoricalDistribution,
    alpha: f64,
) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(alpha * l1(p, q)? + (1.0 - alpha) * delta_specificity(p, q)?)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::param("alpha", format!("{alpha} outside [0, 1]")));
    }
    Ok(())
}

/// Wasserstein distance; `None` selects [`CostMatrix::default_cost`].
pub fn wd(
    p: &CategoricalDistribution,
    q: &CategoricalDistribution,
    cost: Option<&CostMatrix>,
) -> Result<f64> {
    p.check_same_k(q)?;
    match cost {
        Some(c) => Ok(transport::solve(p, q, c)?.value),
        None => Ok(transport::solve(p, q, &CostMatrix::default_cost(p.k())?)?.value),
    }
}

/// Tunable parts of the metric family.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricParams {
    /// Mixing weight of information specificity.
    pub alpha: f64,
    /// Ground cost for WD; `None` means the default `2/k` discrete metric.
    pub cost: Option<CostMatrix>,
}

impl Default for MetricParams {
    fn default() -> Self {
        MetricParams {
            alpha: DEFAULT_IS_ALPHA,
            cost: None,
        }
    }
}

impl MetricParams {
    pub fn validate(&self) -> Result<()> {
        check_alpha(self.alpha)
    }

    /// Raw discrepancy `D(p, q)`.
    pub fn raw(
        &self,
        metric: MetricId,
        p: &CategoricalDistribution,
        q: &CategoricalDistribution,
    ) -> Result<f64> {
        match metric {
            MetricId::L1 => l1(p, q),
            MetricId::L2 => l2(p, q),
            MetricId::Wd => wd(p, q, self.cost.as_ref()),
            MetricId::Specificity => delta_specificity(p, q),
            MetricId::InfoSpecificity => info_specificity(p, q, self.alpha),
        }
    }

    /// Raw value of `metric` between an AB-EP and the uniform distribution.
    pub fn n_factor(&self, metric: MetricId, k: usize) -> Result<f64> {
        if k < 2 {
            return Err(Error::param("k", format!("{k} < 2")));
        }
        let ab = CategoricalDistribution::indicator_k(k, 0)?;
        self.raw(metric, &CategoricalDistribution::uniform_k(k), &ab)
    }
}

/// Raw discrepancy with default parameters.
pub fn raw(
    metric: MetricId,
    p: &CategoricalDistribution,
    q: &CategoricalDistribution,
) -> Result<f64> {
    MetricParams::default().raw(metric, p, q)
}

/// Normalization factor with default parameters. Computed, not tabulated.
pub fn n_factor(metric: MetricId, k: usize) -> Result<f64> {
    MetricParams::default().n_factor(metric, k)
}

/// One evaluation of a fairness-discrepancy metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FairnessScore {
    pub metric: MetricId,
    pub k: usize,
    pub raw: f64,
    pub n_factor: f64,
    pub normalized: f64,
}

/// Normalized fairness discrepancy of `p_est` against the uniform reference,
/// with default parameters.
pub fn fd_score(metric: MetricId, p_est: &CategoricalDistribution) -> Result<FairnessScore> {
    Scorer::new(p_est.k(), MetricParams::default())?.score(metric, p_est)
}

/// Scores distributions of a fixed `k` against the uniform reference,
/// computing each normalization factor once.
#[derive(Debug, Clone)]
pub struct Scorer {
    k: usize,
    params: MetricParams,
    uniform: CategoricalDistribution,
    factors: [f64; 5],
}

impl Scorer {
    pub fn new(k: usize, params: MetricParams) -> Result<Self> {
        params.validate()?;
        if let Some(c) = &params.cost {
            if c.k() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: c.k(),
                });
            }
        }
        let mut factors = [0.0; 5];
        for (slot, m) in factors.iter_mut().zip(MetricId::ALL) {
            *slot = params.n_factor(m, k)?;
        }
        Ok(Scorer {
            k,
            params,
            uniform: CategoricalDistribution::uniform_k(k),
            factors,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_factor(&self, metric: MetricId) -> f64 {
        self.factors[metric as usize]
    }

    pub fn score(
        &self,
        metric: MetricId,
        p_est: &CategoricalDistribution,
    ) -> Result<FairnessScore> {
        let raw = self.params.raw(metric, &self.uniform, p_est)?;
        let n_factor = self.n_factor(metric);
        if n_factor.is_nan() || n_factor <= 0.0 {
            return Err(Error::param(
                "cost",
                format!("normalization factor of {metric} is {n_factor}, must be positive"),
            ));
        }
        let normalized = raw / n_factor;
        let (raw, normalized) = if normalized < ZERO_FLOOR {
            (0.0, 0.0)
        } else {
            (raw, normalized)
        };
        Ok(FairnessScore {
            metric,
            k: self.k,
            raw,
            n_factor,
            normalized,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attrspace::{ab_extreme_points, AttributeSpace};
    use approx::assert_abs_diff_eq;

    fn d(p: &[f64]) -> CategoricalDistribution {
        CategoricalDistribution::new(p.to_vec()).unwrap()
    }

    fn uniform(k: usize) -> CategoricalDistribution {
        CategoricalDistribution::uniform_k(k)
    }

    fn ab(k: usize) -> CategoricalDistribution {
        CategoricalDistribution::indicator_k(k, 0).unwrap()
    }

    #[test]
    fn l1_values() {
        assert_abs_diff_eq!(
            l1(&d(&[0.9, 0.1]), &uniform(2)).unwrap(),
            0.4,
            epsilon = 1e-15
        );
        assert_eq!(l1(&d(&[0.3, 0.7]), &d(&[0.3, 0.7])).unwrap(), 0.0);
        assert_abs_diff_eq!(l1(&ab(4), &uniform(4)).unwrap(), 0.375, epsilon = 1e-15);
        assert!(l1(&ab(2), &uniform(3)).is_err());
    }

    #[test]
    fn l2_values() {
        assert_abs_diff_eq!(
            l2(&ab(2), &uniform(2)).unwrap(),
            0.353553391,
            epsilon = 1e-9
        );
        assert_eq!(l2(&uniform(5), &uniform(5)).unwrap(), 0.0);
        assert_abs_diff_eq!(
            l2(&ab(4), &uniform(4)).unwrap(),
            0.216506351,
            epsilon = 1e-9
        );
    }

    #[test]
    fn weights_sum_to_one_and_decrease() {
        assert_eq!(specificity_weights(2), vec![1.0]);
        assert_eq!(specificity_weights(3), vec![1.0, 0.0]);
        let w4 = specificity_weights(4);
        assert_abs_diff_eq!(w4[0], 2.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(w4[1], 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(w4[2], 0.0);
        for k in 3..=64 {
            let w = specificity_weights(k);
            assert_eq!(w.len(), k - 1);
            assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-12);
            assert!(w.windows(2).all(|p| p[0] > p[1]));
            assert_eq!(*w.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn specificity_values() {
        for k in [2, 3, 4, 8, 16] {
            assert_eq!(specificity(&ab(k)), 1.0);
            assert_abs_diff_eq!(specificity(&uniform(k)), 0.0, epsilon = 1e-15);
        }
        let sp = specificity(&d(&[0.4, 0.3, 0.2, 0.1]));
        assert_abs_diff_eq!(
            sp,
            0.4 - (2.0 / 3.0 * 0.3 + 1.0 / 3.0 * 0.2),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(sp, 0.133333333, epsilon = 1e-8);
        // sorting makes the order of entries irrelevant
        assert_eq!(sp, specificity(&d(&[0.1, 0.3, 0.4, 0.2])));
    }

    #[test]
    fn specificity_vanishes_off_uniform_for_k3() {
        // The smallest entry carries zero weight, so a non-uniform vector
        // whose top k-1 entries agree also has specificity 0.
        assert_abs_diff_eq!(specificity(&d(&[0.4, 0.4, 0.2])), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn delta_specificity_values() {
        assert_eq!(delta_specificity(&ab(2), &uniform(2)).unwrap(), 1.0);
        assert_eq!(
            delta_specificity(&d(&[0.2, 0.8]), &d(&[0.2, 0.8])).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            delta_specificity(&d(&[0.9, 0.1]), &uniform(2)).unwrap(),
            0.8,
            epsilon = 1e-15
        );
    }

    #[test]
    fn info_specificity_values() {
        assert_abs_diff_eq!(
            info_specificity(&ab(2), &uniform(2), 0.5).unwrap(),
            0.75,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            info_specificity(&ab(8), &uniform(8), 0.5).unwrap(),
            0.609375,
            epsilon = 1e-15
        );
        assert_eq!(
            info_specificity(&uniform(3), &uniform(3), 0.5).unwrap(),
            0.0
        );
        assert!(info_specificity(&ab(2), &uniform(2), 1.5).is_err());
        assert!(info_specificity(&ab(2), &uniform(2), -0.1).is_err());
        assert!(info_specificity(&ab(2), &uniform(2), f64::NAN).is_err());
    }

    #[test]
    fn wd_values() {
        assert_abs_diff_eq!(wd(&ab(2), &uniform(2), None).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(wd(&d(&[0.3, 0.7]), &d(&[0.3, 0.7]), None).unwrap(), 0.0);
        let p = d(&[0.1, 0.2, 0.3, 0.4]);
        let q = d(&[0.25, 0.05, 0.6, 0.1]);
        assert_abs_diff_eq!(
            wd(&p, &q, None).unwrap(),
            l1(&p, &q).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn normalization_factors() {
        assert_abs_diff_eq!(
            n_factor(MetricId::L2, 2).unwrap(),
            0.353553391,
            epsilon = 1e-9
        );
        assert_eq!(n_factor(MetricId::Specificity, 16).unwrap(), 1.0);
        assert_abs_diff_eq!(
            n_factor(MetricId::Wd, 16).unwrap(),
            0.1171875,
            epsilon = 1e-12
        );
        assert!(n_factor(MetricId::L1, 1).is_err());
    }

    #[test]
    fn n_factor_is_the_same_at_every_extreme_point() {
        let params = MetricParams::default();
        for k in [2, 4, 8] {
            let s = AttributeSpace::with_cardinality(k).unwrap();
            for m in MetricId::ALL {
                let f = params.n_factor(m, k).unwrap();
                for e in ab_extreme_points(&s) {
                    let r = params.raw(m, &uniform(k), &e).unwrap();
                    assert_abs_diff_eq!(r, f, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn worked_example_l2() {
        // exact value is sqrt(0.32)/sqrt(0.5) = 0.8; 0.799 comes from rounding
        // the numerator to 0.565 first
        let s = fd_score(MetricId::L2, &d(&[0.9, 0.1])).unwrap();
        assert_abs_diff_eq!(s.normalized, 0.8, epsilon = 1e-12);
        assert!(
            (s.normalized - 0.799).abs() <= 0.001 + 1e-12,
            "{}",
            s.normalized
        );
        assert_abs_diff_eq!(s.normalized, s.raw / s.n_factor, epsilon = 1e-12);
    }

    #[test]
    fn score_endpoints() {
        for k in [2, 3, 4, 8, 16] {
            for m in MetricId::ALL {
                assert_abs_diff_eq!(
                    fd_score(m, &uniform(k)).unwrap().normalized,
                    0.0,
                    epsilon = 1e-12
                );
                assert_abs_diff_eq!(
                    fd_score(m, &ab(k)).unwrap().normalized,
                    1.0,
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn scorer_rejects_mismatched_cost() {
        let params = MetricParams {
            cost: Some(CostMatrix::default_cost(3).unwrap()),
            ..Default::default()
        };
        assert!(Scorer::new(4, params).is_err());
        let params = MetricParams {
            alpha: 2.0,
            cost: None,
        };
        assert!(Scorer::new(4, params).is_err());
    }

    #[test]
    fn metric_names() {
        assert_eq!(MetricId::parse_list("all").unwrap(), MetricId::ALL.to_vec());
        assert_eq!(
            MetricId::parse_list("spec, l1,spec").unwrap(),
            vec![MetricId::Specificity, MetricId::L1]
        );
        assert!(MetricId::parse_list("kl").is_err());
        assert!(MetricId::parse_list("").is_err());
        for m in MetricId::ALL {
            assert_eq!(m.name().parse::<MetricId>().unwrap(), m);
        }
    }
}
