//! Attribute-classifier noise model.
//!
//! A classifier is represented by its confusion matrix: row `i` is the
//! distribution of predicted outcomes for samples whose true outcome is `i`.
//! The estimated attribute distribution of a generator with true
//! distribution `p` is then `M^T p` in expectation, or a tally of seeded
//! draws when simulating a finite sample.

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::attrspace::{AttributeSpace, CategoricalDistribution, DIST_TOL};
use crate::error::{Error, Result};

/// Row-stochastic `k x k` confusion matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfusion", into = "RawConfusion")]
pub struct ConfusionModel {
    m: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct RawConfusion {
    k: usize,
    m: Vec<Vec<f64>>,
}

impl TryFrom<RawConfusion> for ConfusionModel {
    type Error = Error;

    fn try_from(raw: RawConfusion) -> Result<Self> {
        if raw.m.len() != raw.k {
            return Err(Error::InvalidConfusion(format!(
                "k={} but matrix has {} rows",
                raw.k,
                raw.m.len()
            )));
        }
        ConfusionModel::new(raw.m)
    }
}

impl From<ConfusionModel> for RawConfusion {
    fn from(model: ConfusionModel) -> Self {
        RawConfusion {
            k: model.k(),
            m: model.m,
        }
    }
}

impl ConfusionModel {
    pub fn new(m: Vec<Vec<f64>>) -> Result<Self> {
        let k = m.len();
        if k < 2 {
            return Err(Error::InvalidConfusion(format!("k={k}, need k >= 2")));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != k {
                return Err(Error::InvalidConfusion(format!(
                    "row {i} has {} entries, expected {k}",
                    row.len()
                )));
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidConfusion(format!("row {i} contains {x}")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > DIST_TOL {
                return Err(Error::InvalidConfusion(format!("row {i} sums to {sum}")));
            }
        }
        Ok(ConfusionModel { m })
    }

    /// The perfect classifier: identity.
    pub fn perfect(k: usize) -> Result<Self> {
        Self::uniform_noise(k, 0.0)
    }

    /// `(1 - eps) I + (eps / k) J`: with probability `eps` the label is
    /// replaced by a uniformly random one.
    pub fn uniform_noise(k: usize, eps: f64) -> Result<Self> {
        if k < 2 {
            return Err(Error::param("k", format!("{k} < 2")));
        }
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::param("eps", format!("{eps} outside [0, 1]")));
        }
        let off = eps / k as f64;
        let m = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { 1.0 - eps + off } else { off })
                    .collect()
            })
            .collect();
        Ok(ConfusionModel { m })
    }

    /// Diagonal from `acc`; the error mass `1 - acc[i]` is spread evenly over
    /// the other `k - 1` outcomes.
    pub fn from_accuracies(acc: &[f64]) -> Result<Self> {
        let k = acc.len();
        if k < 2 {
            return Err(Error::param("accuracies", format!("need k >= 2, got {k}")));
        }
        if let Some(a) = acc.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return Err(Error::param("accuracies", format!("{a} outside [0, 1]")));
        }
        let m = acc
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let off = (1.0 - a) / (k - 1) as f64;
                (0..k).map(|j| if i == j { a } else { off }).collect()
            })
            .collect();
        Ok(ConfusionModel { m })
    }

    pub fn k(&self) -> usize {
        self.m.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.m[i]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.m
    }

    pub fn per_class_accuracy(&self) -> Vec<f64> {
        (0..self.k()).map(|i| self.m[i][i]).collect()
    }

    pub fn mean_accuracy(&self) -> f64 {
        self.per_class_accuracy().iter().sum::<f64>() / self.k() as f64
    }

    /// Estimated attribute distribution of a generator whose true
    /// distribution is `p_true`.
    pub fn estimate(
        &self,
        p_true: &CategoricalDistribution,
        mode: EstimationMode,
    ) -> Result<CategoricalDistribution> {
        let k = self.k();
        if p_true.k() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: p_true.k(),
            });
        }
        match mode {
            EstimationMode::Expectation => {
                let mut out = vec![0.0; k];
                for (pi, row) in p_true.probs().iter().zip(&self.m) {
                    for (o, mij) in out.iter_mut().zip(row) {
                        *o += pi * mij;
                    }
                }
                CategoricalDistribution::new(out)
            }
            EstimationMode::Sampled { n, seed } => {
                mode.validate()?;
                let tally = self.sample_tally(p_true, n, seed)?;
                Ok(CategoricalDistribution::from_valid(
                    tally.iter().map(|&c| c as f64 / n as f64).collect(),
                ))
            }
        }
    }

    /// Draws `n` true outcomes from `p_true` and one prediction for each from
    /// the matching row. Returns prediction counts.
    pub fn sample_tally(
        &self,
        p_true: &CategoricalDistribution,
        n: usize,
        seed: u64,
    ) -> Result<Vec<u64>> {
        let k = self.k();
        let truth = WeightedIndex::new(p_true.probs())
            .map_err(|e| Error::InvalidDistribution(e.to_string()))?;
        let rows = self
            .m
            .iter()
            .map(|r| WeightedIndex::new(r).map_err(|e| Error::InvalidConfusion(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tally = vec![0u64; k];
        for _ in 0..n {
            let t = truth.sample(&mut rng);
            tally[rows[t].sample(&mut rng)] += 1;
        }
        Ok(tally)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum EstimationMode {
    /// Exact `M^T p`.
    Expectation,
    /// `n` seeded draws.
    Sampled { n: usize, seed: u64 },
}

impl EstimationMode {
    pub fn validate(&self) -> Result<()> {
        match self {
            EstimationMode::Sampled { n: 0, .. } => {
                Err(Error::param("n", "sample count must be >= 1"))
            }
            _ => Ok(()),
        }
    }

    /// The same mode with its seed replaced by one derived from `parts`.
    pub fn for_cell(self, parts: &[u64]) -> Self {
        match self {
            EstimationMode::Expectation => self,
            EstimationMode::Sampled { n, seed } => EstimationMode::Sampled {
                n,
                seed: derive_seed(seed, parts),
            },
        }
    }
}

/// Stable per-cell seed: SplitMix64 finalizer folded over `parts`. Depends
/// only on the inputs, never on evaluation order.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    fn mix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts
        .iter()
        .fold(mix(base), |h, &p| mix(h ^ mix(p).rotate_left(23)))
}

/// Named classifier accuracy presets.
pub mod presets {
    use super::ConfusionModel;
    use crate::error::{Error, Result};

    /// `(name, description, k, mean accuracy)`.
    pub const TABLE: &[(&str, &str, usize, f64)] = &[
        ("set1-a", "gender", 2, 0.98),
        ("set1-b", "youth", 2, 0.81),
        ("set1-c", "male, black hair", 4, 0.83),
        ("set1-d", "young, smiling", 4, 0.72),
        ("set2-k2", "gender", 2, 0.98),
        ("set2-k4", "gender, black hair", 4, 0.86),
        ("set2-k8", "gender, black hair, smiling", 8, 0.78),
        ("set2-k16", "gender, black hair, smiling, bangs", 16, 0.66),
    ];

    pub fn names() -> impl Iterator<Item = &'static str> {
        TABLE.iter().map(|e| e.0)
    }

    /// Resolves a preset for cardinality `k`.
    ///
    /// `perfect` works for any `k`; `set2` picks the attribute-increment
    /// preset matching `k`. Named presets must match `k` exactly. Every
    /// class gets the preset's mean accuracy with errors spread uniformly.
    pub fn resolve(name: &str, k: usize) -> Result<ConfusionModel> {
        if name == "perfect" {
            return ConfusionModel::perfect(k);
        }
        let lookup = if name == "set2" {
            format!("set2-k{k}")
        } else {
            name.to_string()
        };
        let &(_, _, pk, acc) = TABLE.iter().find(|e| e.0 == lookup).ok_or_else(|| {
            Error::param("classifier", format!("unknown preset `{name}` for k={k}"))
        })?;
        if pk != k {
            return Err(Error::param(
                "classifier",
                format!("preset `{name}` is defined for k={pk}, not k={k}"),
            ));
        }
        ConfusionModel::from_accuracies(&vec![acc; k])
    }
}

/// One classifier output read from a predictions file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionRecord {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probs: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pred: Option<usize>,
    #[serde(default, rename = "true", skip_serializing_if = "Option::is_none")]
    pub truth: Option<usize>,
}

/// Result of [`ingest_predictions`].
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub estimated: CategoricalDistribution,
    /// Present when every record carries a truth label and every outcome
    /// occurs at least once as a truth label.
    pub confusion: Option<ConfusionModel>,
    pub records: usize,
    pub soft: bool,
}

/// Aggregates classifier outputs into an estimated attribute distribution.
///
/// Soft records (`probs`) are averaged; hard records (`pred`) are tallied.
/// A stream must be all soft or all hard. When truth labels are present the
/// empirical confusion matrix is returned as well, using the argmax of soft
/// outputs (lowest index on ties).
pub fn ingest_predictions<I>(space: &AttributeSpace, records: I) -> Result<Ingested>
where
    I: IntoIterator<Item = PredictionRecord>,
{
    let k = space.k();
    let mut acc = vec![0.0; k];
    let mut counts = vec![vec![0u64; k]; k];
    let mut all_truth = true;
    let mut soft: Option<bool> = None;
    let mut n = 0usize;

    for (record, r) in records.into_iter().enumerate() {
        let (is_soft, predicted) = match (&r.probs, r.pred) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidRecord {
                    record,
                    reason: "has both `probs` and `pred`".into(),
                })
            }
            (None, None) => {
                return Err(Error::InvalidRecord {
                    record,
                    reason: "has neither `probs` nor `pred`".into(),
                })
            }
            (Some(p), None) => {
                if p.len() != k {
                    return Err(Error::InvalidRecord {
                        record,
                        reason: format!("`probs` has {} entries, expected {k}", p.len()),
                    });
                }
                if p.iter().any(|x| !x.is_finite() || *x < 0.0) {
                    return Err(Error::InvalidRecord {
                        record,
                        reason: "`probs` has a negative or non-finite entry".into(),
                    });
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > 1e-6 {
                    return Err(Error::InvalidRecord {
                        record,
                        reason: format!("`probs` sums to {sum}"),
                    });
                }
                for (a, x) in acc.iter_mut().zip(p) {
                    *a += x;
                }
                let argmax = p
                    .iter()
                    .enumerate()
                    .fold(0, |best, (i, x)| if *x > p[best] { i } else { best });
                (true, argmax)
            }
            (None, Some(idx)) => {
                if idx >= k {
                    return Err(Error::OutcomeOutOfRange {
                        record,
                        index: idx,
                        k,
                    });
                }
                acc[idx] += 1.0;
                (false, idx)
            }
        };
        match soft {
            None => soft = Some(is_soft),
            Some(s) if s != is_soft => return Err(Error::MixedPredictions { record }),
            _ => {}
        }
        match r.truth {
            Some(t) if t >= k => {
                return Err(Error::OutcomeOutOfRange {
                    record,
                    index: t,
                    k,
                })
            }
            Some(t) => counts[t][predicted] += 1,
            None => all_truth = false,
        }
        n += 1;
    }

    if n == 0 {
        return Err(Error::NoPredictions);
    }
    let estimated = CategoricalDistribution::new(acc.iter().map(|a| a / n as f64).collect())?;
    let confusion = if all_truth && counts.iter().all(|row| row.iter().any(|&c| c > 0)) {
        let m = counts
            .iter()
            .map(|row| {
                let total = row.iter().sum::<u64>() as f64;
                row.iter().map(|&c| c as f64 / total).collect()
            })
            .collect();
        Some(ConfusionModel::new(m)?)
    } else {
        None
    };
    Ok(Ingested {
        estimated,
        confusion,
        records: n,
        soft: soft.unwrap_or(false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attrspace::ab_extreme_points;
    use crate::metrics::{fd_score, MetricId};
    use approx::assert_abs_diff_eq;

    fn d(p: &[f64]) -> CategoricalDistribution {
        CategoricalDistribution::new(p.to_vec()).unwrap()
    }

    fn space(k: usize) -> AttributeSpace {
        AttributeSpace::with_cardinality(k).unwrap()
    }

    fn hard(id: &str, pred: usize, truth: Option<usize>) -> PredictionRecord {
        PredictionRecord {
            id: id.into(),
            probs: None,
            pred: Some(pred),
            truth,
        }
    }

    fn soft(id: &str, probs: &[f64], truth: Option<usize>) -> PredictionRecord {
        PredictionRecord {
            id: id.into(),
            probs: Some(probs.to_vec()),
            pred: None,
            truth,
        }
    }

    #[test]
    fn perfect_is_identity() {
        let m = ConfusionModel::perfect(2).unwrap();
        assert_eq!(m.rows(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
        assert_eq!(m.per_class_accuracy(), vec![1.0, 1.0]);
        let p = d(&[0.3, 0.7]);
        assert_eq!(m.estimate(&p, EstimationMode::Expectation).unwrap(), p);
    }

    #[test]
    fn uniform_noise_entries() {
        assert_eq!(
            ConfusionModel::uniform_noise(3, 0.0).unwrap(),
            ConfusionModel::perfect(3).unwrap()
        );
        let m = ConfusionModel::uniform_noise(2, 1.0).unwrap();
        assert_eq!(m.rows(), &[vec![0.5, 0.5], vec![0.5, 0.5]]);
        let m = ConfusionModel::uniform_noise(2, 0.1).unwrap();
        let est = m
            .estimate(&d(&[1.0, 0.0]), EstimationMode::Expectation)
            .unwrap();
        assert_abs_diff_eq!(est.probs()[0], 0.95, epsilon = 1e-15);
        assert_abs_diff_eq!(est.probs()[1], 0.05, epsilon = 1e-15);
        assert!(ConfusionModel::uniform_noise(2, 1.1).is_err());
        assert!(ConfusionModel::uniform_noise(2, -0.1).is_err());
        for k in [2, 4, 8] {
            let acc = ConfusionModel::uniform_noise(k, 0.3)
                .unwrap()
                .per_class_accuracy();
            for a in acc {
                assert_abs_diff_eq!(a, 1.0 - 0.3 + 0.3 / k as f64, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn accuracies_build_rows() {
        let m = ConfusionModel::from_accuracies(&[0.98, 0.95]).unwrap();
        assert_abs_diff_eq!(m.row(0)[1], 0.02, epsilon = 1e-15);
        assert_abs_diff_eq!(m.row(1)[0], 0.05, epsilon = 1e-15);
        assert_eq!(m.per_class_accuracy(), vec![0.98, 0.95]);
        assert_eq!(
            ConfusionModel::from_accuracies(&[1.0; 3]).unwrap(),
            ConfusionModel::perfect(3).unwrap()
        );
        let m = ConfusionModel::from_accuracies(&[0.7; 4]).unwrap();
        assert_abs_diff_eq!(m.row(2)[0], 0.1, epsilon = 1e-15);
        assert!(ConfusionModel::from_accuracies(&[0.5, 1.2]).is_err());
        assert!(ConfusionModel::from_accuracies(&[0.5]).is_err());
    }

    #[test]
    fn expectation_matrix_product() {
        let m = ConfusionModel::from_accuracies(&[0.98, 0.95]).unwrap();
        let est = m
            .estimate(&d(&[1.0, 0.0]), EstimationMode::Expectation)
            .unwrap();
        assert_abs_diff_eq!(est.probs()[0], 0.98, epsilon = 1e-15);
        assert_abs_diff_eq!(est.probs()[1], 0.02, epsilon = 1e-15);
        assert!(m
            .estimate(&d(&[0.2, 0.3, 0.5]), EstimationMode::Expectation)
            .is_err());
    }

    #[test]
    fn noise_deflates_ab_score_exactly() {
        for k in [2, 4, 8, 16] {
            for eps in [0.1, 0.3] {
                let m = ConfusionModel::uniform_noise(k, eps).unwrap();
                for e in ab_extreme_points(&space(k)) {
                    let est = m.estimate(&e, EstimationMode::Expectation).unwrap();
                    let s = fd_score(MetricId::L1, &est).unwrap();
                    assert_abs_diff_eq!(s.normalized, 1.0 - eps, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn sampled_is_deterministic_and_close() {
        let m = ConfusionModel::from_accuracies(&[0.9, 0.8, 0.7, 0.95]).unwrap();
        let p = d(&[0.4, 0.3, 0.2, 0.1]);
        let mode = EstimationMode::Sampled { n: 20_000, seed: 7 };
        let a = m.estimate(&p, mode).unwrap();
        let b = m.estimate(&p, mode).unwrap();
        assert_eq!(a, b);
        let c = m
            .estimate(&p, EstimationMode::Sampled { n: 20_000, seed: 8 })
            .unwrap();
        assert_ne!(a, c);
        let e = m.estimate(&p, EstimationMode::Expectation).unwrap();
        for (x, y) in a.probs().iter().zip(e.probs()) {
            assert!((x - y).abs() < 0.02);
        }
        assert!(m
            .estimate(&p, EstimationMode::Sampled { n: 0, seed: 1 })
            .is_err());
    }

    #[test]
    fn derived_seeds_differ_per_cell() {
        let a = derive_seed(42, &[4, 0, 1]);
        assert_eq!(a, derive_seed(42, &[4, 0, 1]));
        assert_ne!(a, derive_seed(42, &[4, 1, 0]));
        assert_ne!(a, derive_seed(43, &[4, 0, 1]));
        assert_ne!(derive_seed(0, &[]), derive_seed(0, &[0]));
    }

    #[test]
    fn presets_resolve() {
        let m = presets::resolve("set2", 8).unwrap();
        assert_eq!(m.k(), 8);
        assert_abs_diff_eq!(m.mean_accuracy(), 0.78, epsilon = 1e-12);
        assert_eq!(
            presets::resolve("set1-c", 4).unwrap().per_class_accuracy(),
            vec![0.83; 4]
        );
        assert!(presets::resolve("set1-c", 2).is_err());
        assert!(presets::resolve("set2", 32).is_err());
        assert!(presets::resolve("nope", 2).is_err());
        assert_eq!(
            presets::resolve("perfect", 5).unwrap(),
            ConfusionModel::perfect(5).unwrap()
        );
        assert_eq!(presets::names().count(), 8);
    }

    #[test]
    fn ingest_hard() {
        let out =
            ingest_predictions(&space(2), vec![hard("a", 0, None), hard("b", 1, None)]).unwrap();
        assert_eq!(out.estimated.probs(), &[0.5, 0.5]);
        assert!(out.confusion.is_none());
        assert!(!out.soft);
    }

    #[test]
    fn ingest_soft_mean() {
        let out = ingest_predictions(
            &space(2),
            vec![soft("a", &[0.9, 0.1], None), soft("b", &[0.7, 0.3], None)],
        )
        .unwrap();
        assert_abs_diff_eq!(out.estimated.probs()[0], 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(out.estimated.probs()[1], 0.2, epsilon = 1e-12);
        assert!(out.soft);
    }

    #[test]
    fn ingest_confusion() {
        let out = ingest_predictions(
            &space(2),
            vec![
                hard("a", 0, Some(0)),
                hard("b", 1, Some(1)),
                hard("c", 1, Some(1)),
            ],
        )
        .unwrap();
        assert_eq!(out.confusion.unwrap(), ConfusionModel::perfect(2).unwrap());

        let out = ingest_predictions(
            &space(2),
            vec![
                soft("a", &[0.6, 0.4], Some(0)),
                soft("b", &[0.3, 0.7], Some(0)),
                soft("c", &[0.2, 0.8], Some(1)),
            ],
        )
        .unwrap();
        let m = out.confusion.unwrap();
        assert_eq!(m.rows(), &[vec![0.5, 0.5], vec![0.0, 1.0]]);

        // truth never hits class 1: no confusion matrix
        let out = ingest_predictions(
            &space(2),
            vec![hard("a", 0, Some(0)), hard("b", 1, Some(0))],
        )
        .unwrap();
        assert!(out.confusion.is_none());
    }

    #[test]
    fn ingest_errors_are_distinct() {
        let s = space(2);
        assert_eq!(ingest_predictions(&s, vec![]), Err(Error::NoPredictions));
        assert_eq!(
            ingest_predictions(&s, vec![hard("a", 0, None), soft("b", &[0.5, 0.5], None)]),
            Err(Error::MixedPredictions { record: 1 })
        );
        assert_eq!(
            ingest_predictions(&s, vec![hard("a", 2, None)]),
            Err(Error::OutcomeOutOfRange {
                record: 0,
                index: 2,
                k: 2
            })
        );
        assert_eq!(
            ingest_predictions(&s, vec![hard("a", 0, Some(5))]),
            Err(Error::OutcomeOutOfRange {
                record: 0,
                index: 5,
                k: 2
            })
        );
        assert!(matches!(
            ingest_predictions(&s, vec![soft("a", &[0.5, 0.4], None)]),
            Err(Error::InvalidRecord { record: 0, .. })
        ));
        assert!(matches!(
            ingest_predictions(&s, vec![soft("a", &[0.5, 0.25, 0.25], None)]),
            Err(Error::InvalidRecord { .. })
        ));
    }

    #[test]
    fn ingest_agrees_with_sampled_tally() {
        let m = ConfusionModel::from_accuracies(&[0.9, 0.6, 0.75]).unwrap();
        let p = d(&[0.5, 0.3, 0.2]);
        let n = 5000;
        let tally = m.sample_tally(&p, n, 99).unwrap();
        let records: Vec<_> = tally
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| (0..c).map(move |j| hard(&format!("{i}-{j}"), i, None)))
            .collect();
        let ingested = ingest_predictions(&space(3), records).unwrap();
        let sampled = m
            .estimate(&p, EstimationMode::Sampled { n, seed: 99 })
            .unwrap();
        assert!(ingested.estimated.approx_eq(&sampled));
    }

    #[test]
    fn json_schemas() {
        let m: ConfusionModel =
            serde_json::from_str(r#"{"k":2,"m":[[0.98,0.02],[0.05,0.95]]}"#).unwrap();
        assert_eq!(m.per_class_accuracy(), vec![0.98, 0.95]);
        assert!(
            serde_json::from_str::<ConfusionModel>(r#"{"k":2,"m":[[0.9,0.2],[0.05,0.95]]}"#)
                .is_err()
        );
        let r: PredictionRecord =
            serde_json::from_str(r#"{"id":"img_001","pred":0,"true":0}"#).unwrap();
        assert_eq!(r.truth, Some(0));
        let r: PredictionRecord =
            serde_json::from_str(r#"{"id":"img_001","probs":[0.9,0.1]}"#).unwrap();
        assert_eq!(r.probs, Some(vec![0.9, 0.1]));
    }
}
