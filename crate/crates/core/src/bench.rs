//! Performance benchmarks for fairness metrics under classifier noise.
//!
//! * MEPE (mean extreme-point error) measures how far scores at the fair
//!   extreme point sit from 0 and scores at absolutely biased extreme points
//!   sit from 1.
//! * EP-var is the population variance of scores at an extreme-point kind.
//! * MEM (mean error measurement) is the mean `|f - f*|` along a sweep from
//!   an AB-EP to the uniform distribution, where `f*` is the score a perfect
//!   classifier would report.
//!
//! Extreme-point scores are pooled across every configured `k`, so one
//! figure summarizes a metric's behaviour independent of cardinality. MEM is
//! reported per `k`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::attrspace::{ab_extreme_points, sweep_from, AttributeSpace, CategoricalDistribution};
use crate::classifier::{ConfusionModel, EstimationMode};
use crate::error::{Error, Result};
use crate::metrics::{MetricId, MetricParams, Scorer};

/// Default sweep step in probability units.
pub const DEFAULT_STEP: f64 = 0.01;
/// Default number of sampled trials per cell.
pub const DEFAULT_TRIALS: usize = 30;
/// Scores closer than this are reported as ties.
pub const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ScoreKind {
    FairEp,
    AbEp,
    Sweep,
}

impl ScoreKind {
    pub fn name(self) -> &'static str {
        match self {
            ScoreKind::FairEp => "fair",
            ScoreKind::AbEp => "ab",
            ScoreKind::Sweep => "sweep",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScoreEntry {
    pub k: usize,
    pub metric: MetricId,
    /// Normalized score under the modelled classifier.
    pub f: f64,
    /// Normalized score under the perfect classifier.
    pub f_star: Option<f64>,
    /// AB-EP index, or the sweep's starting outcome. Zero at the fair EP.
    pub point: usize,
    pub trial: usize,
    /// 1-based sweep epoch.
    pub epoch: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreSet {
    pub kind: ScoreKind,
    pub entries: Vec<ScoreEntry>,
}

impl ScoreSet {
    pub fn new(kind: ScoreKind) -> Self {
        ScoreSet {
            kind,
            entries: Vec::new(),
        }
    }

    /// Bare scores without ground truth, for hand-built sets.
    pub fn from_scores(kind: ScoreKind, metric: MetricId, k: usize, scores: &[f64]) -> Self {
        ScoreSet {
            kind,
            entries: scores
                .iter()
                .enumerate()
                .map(|(i, &f)| ScoreEntry {
                    k,
                    metric,
                    f,
                    f_star: None,
                    point: i,
                    trial: 0,
                    epoch: None,
                })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn for_metric(&self, metric: MetricId) -> ScoreSet {
        self.filtered(|e| e.metric == metric)
    }

    pub fn for_k(&self, k: usize) -> ScoreSet {
        self.filtered(|e| e.k == k)
    }

    pub fn filtered(&self, keep: impl Fn(&ScoreEntry) -> bool) -> ScoreSet {
        ScoreSet {
            kind: self.kind,
            entries: self.entries.iter().filter(|e| keep(e)).copied().collect(),
        }
    }

    pub fn extend(&mut self, other: ScoreSet) -> Result<()> {
        self.require(other.kind)?;
        self.entries.extend(other.entries);
        Ok(())
    }

    pub fn scores(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|e| e.f)
    }

    fn require(&self, kind: ScoreKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongScoreKind {
                expected: kind.name(),
                found: self.kind.name(),
            });
        }
        Ok(())
    }

    fn mean_of(&self, f: impl Fn(&ScoreEntry) -> f64) -> Result<f64> {
        if self.entries.is_empty() {
            return Err(Error::Empty("score set"));
        }
        Ok(self.entries.iter().map(f).sum::<f64>() / self.entries.len() as f64)
    }
}

/// Mean absolute distance of fair-EP scores from 0.
pub fn mepe_fair(s: &ScoreSet) -> Result<f64> {
    s.require(ScoreKind::FairEp)?;
    s.mean_of(|e| e.f.abs())
}

/// Mean absolute distance of AB-EP scores from 1.
pub fn mepe_ab(s: &ScoreSet) -> Result<f64> {
    s.require(ScoreKind::AbEp)?;
    s.mean_of(|e| (e.f - 1.0).abs())
}

/// Population variance (divisor `N`) of the scores.
pub fn ep_var(s: &ScoreSet) -> Result<f64> {
    // shifted by the first score so identical scores give exactly 0
    let shift = s.entries.first().ok_or(Error::Empty("score set"))?.f;
    let mu = shift + s.mean_of(|e| e.f - shift)?;
    s.mean_of(|e| (e.f - mu) * (e.f - mu))
}

/// Mean `|f - f*|` over a sweep.
pub fn mem(s: &ScoreSet) -> Result<f64> {
    s.require(ScoreKind::Sweep)?;
    if let Some(i) = s.entries.iter().position(|e| e.f_star.is_none()) {
        return Err(Error::MissingGroundTruth(i));
    }
    s.mean_of(|e| (e.f - e.f_star.unwrap_or(f64::NAN)).abs())
}

/// Which AB-EPs a sweep starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepStarts {
    /// Only the given outcome.
    Single(usize),
    /// Every outcome in turn; MEM averages over all of them.
    All,
}

impl SweepStarts {
    fn indices(self, k: usize) -> Result<Vec<usize>> {
        match self {
            SweepStarts::All => Ok((0..k).collect()),
            SweepStarts::Single(i) if i < k => Ok(vec![i]),
            SweepStarts::Single(i) => Err(Error::param("start", format!("{i} >= k={k}"))),
        }
    }
}

/// One sweep epoch: true and estimated distributions and per-metric scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEpoch {
    pub start: usize,
    pub trial: usize,
    pub epoch: usize,
    pub p_true: Vec<f64>,
    pub p_est: Vec<f64>,
    /// `(metric, f, f*)`
    pub scores: Vec<(MetricId, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRun {
    pub set: ScoreSet,
    pub trace: Vec<TraceEpoch>,
}

/// Everything needed to evaluate metrics at one cardinality.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub space: AttributeSpace,
    pub model: ConfusionModel,
    /// Free-form description of the classifier, carried into reports.
    pub label: String,
    pub mode: EstimationMode,
    pub metrics: Vec<MetricId>,
    /// Repetitions per cell in sampled mode; ignored in expectation mode.
    pub trials: usize,
    pub params: MetricParams,
}

impl ExperimentConfig {
    pub fn new(space: AttributeSpace, model: ConfusionModel, mode: EstimationMode) -> Self {
        ExperimentConfig {
            space,
            model,
            label: String::new(),
            mode,
            metrics: MetricId::ALL.to_vec(),
            trials: DEFAULT_TRIALS,
            params: MetricParams::default(),
        }
    }

    pub fn k(&self) -> usize {
        self.space.k()
    }

    fn validate(&self) -> Result<Scorer> {
        if self.model.k() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: self.k(),
                found: self.model.k(),
            });
        }
        if self.metrics.is_empty() {
            return Err(Error::Empty("metric list"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "must be >= 1"));
        }
        self.mode.validate()?;
        Scorer::new(self.k(), self.params.clone())
    }

    fn effective_trials(&self) -> usize {
        match self.mode {
            EstimationMode::Expectation => 1,
            EstimationMode::Sampled { .. } => self.trials,
        }
    }

    /// Scores at the fair EP and at each AB-EP. Returns `(fair, ab)`.
    pub fn run_ep_analysis(&self) -> Result<(ScoreSet, ScoreSet)> {
        let scorer = self.validate()?;
        let k = self.k();
        let mut fair = ScoreSet::new(ScoreKind::FairEp);
        let mut ab = ScoreSet::new(ScoreKind::AbEp);
        let uniform = CategoricalDistribution::uniform(&self.space);
        let extremes = ab_extreme_points(&self.space);

        for trial in 0..self.effective_trials() {
            let cell = |point: u64| self.mode.for_cell(&[k as u64, trial as u64, 0, point]);
            let est = self.model.estimate(&uniform, cell(0))?;
            for &m in &self.metrics {
                fair.entries.push(ScoreEntry {
                    k,
                    metric: m,
                    f: scorer.score(m, &est)?.normalized,
                    f_star: Some(0.0),
                    point: 0,
                    trial,
                    epoch: None,
                });
            }
            for (i, e) in extremes.iter().enumerate() {
                let est = self.model.estimate(e, cell(i as u64 + 1))?;
                for &m in &self.metrics {
                    ab.entries.push(ScoreEntry {
                        k,
                        metric: m,
                        f: scorer.score(m, &est)?.normalized,
                        f_star: Some(1.0),
                        point: i,
                        trial,
                        epoch: None,
                    });
                }
            }
        }
        Ok((fair, ab))
    }

    /// Scores along sweeps from AB-EPs to uniform, with the perfect
    /// classifier's scores alongside.
    pub fn run_sweep(&self, step: f64, starts: SweepStarts) -> Result<SweepRun> {
        let scorer = self.validate()?;
        let k = self.k();
        let mut set = ScoreSet::new(ScoreKind::Sweep);
        let mut trace = Vec::new();

        for start in starts.indices(k)? {
            let path = sweep_from(&self.space, start, step)?;
            for trial in 0..self.effective_trials() {
                for (e, p_true) in path.iter().enumerate() {
                    let epoch = e + 1;
                    let mode = self.mode.for_cell(&[
                        k as u64,
                        trial as u64,
                        1,
                        start as u64,
                        epoch as u64,
                    ]);
                    let p_est = self.model.estimate(p_true, mode)?;
                    let mut scores = Vec::with_capacity(self.metrics.len());
                    for &m in &self.metrics {
                        let f = scorer.score(m, &p_est)?.normalized;
                        let f_star = scorer.score(m, p_true)?.normalized;
                        set.entries.push(ScoreEntry {
                            k,
                            metric: m,
                            f,
                            f_star: Some(f_star),
                            point: start,
                            trial,
                            epoch: Some(epoch),
                        });
                        scores.push((m, f, f_star));
                    }
                    trace.push(TraceEpoch {
                        start,
                        trial,
                        epoch,
                        p_true: p_true.probs().to_vec(),
                        p_est: p_est.into_probs(),
                        scores,
                    });
                }
            }
        }
        Ok(SweepRun { set, trace })
    }
}

/// Fair-EP and AB-EP score sets for one configuration.
pub fn run_ep_analysis(config: &ExperimentConfig) -> Result<(ScoreSet, ScoreSet)> {
    config.run_ep_analysis()
}

pub fn run_sweep(config: &ExperimentConfig, step: f64, starts: SweepStarts) -> Result<SweepRun> {
    config.run_sweep(step, starts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Benchmark {
    Mepe,
    EpVar,
    Mem,
}

impl Benchmark {
    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Mepe => "MEPE",
            Benchmark::EpVar => "EP-var",
            Benchmark::Mem => "MEM",
        }
    }

    fn title(self) -> &'static str {
        match self {
            Benchmark::Mepe => "Mean Extreme Point Error",
            Benchmark::EpVar => "Extreme Point Variability",
            Benchmark::Mem => "Mean Error Measurement",
        }
    }
}

/// One benchmark row: a value per metric plus best/worst tags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub benchmark: Benchmark,
    pub kind: ScoreKind,
    pub k_set: Vec<usize>,
    /// `true` for the pooled rows, `false` for per-k breakdowns.
    pub pooled: bool,
    pub values: Vec<(MetricId, f64)>,
    /// Metrics attaining the minimum (lower is better); several on a tie.
    pub best: Vec<MetricId>,
    pub worst: Vec<MetricId>,
}

impl ReportRow {
    fn new(
        benchmark: Benchmark,
        kind: ScoreKind,
        k_set: Vec<usize>,
        pooled: bool,
        values: Vec<(MetricId, f64)>,
    ) -> Self {
        let min = values.iter().map(|v| v.1).fold(f64::INFINITY, f64::min);
        let max = values.iter().map(|v| v.1).fold(f64::NEG_INFINITY, f64::max);
        let tie = |a: f64, b: f64| (a - b).abs() <= TIE_TOL * a.abs().max(b.abs()).max(1.0);
        ReportRow {
            benchmark,
            kind,
            k_set,
            pooled,
            best: values
                .iter()
                .filter(|v| tie(v.1, min))
                .map(|v| v.0)
                .collect(),
            worst: values
                .iter()
                .filter(|v| tie(v.1, max))
                .map(|v| v.0)
                .collect(),
            values,
        }
    }

    pub fn value(&self, metric: MetricId) -> Option<f64> {
        self.values.iter().find(|v| v.0 == metric).map(|v| v.1)
    }

    pub fn k_set_label(&self) -> String {
        self.k_set
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMeta {
    pub k_set: Vec<usize>,
    /// Classifier description per k.
    pub classifiers: Vec<(usize, String)>,
    pub mode: EstimationMode,
    pub trials: usize,
    pub step: f64,
    pub starts: SweepStarts,
    /// Pool sizes N (distinct extreme points, before trial repetition).
    pub n_fair: usize,
    pub n_ab: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkReport {
    pub metrics: Vec<MetricId>,
    pub rows: Vec<ReportRow>,
    pub meta: ReportMeta,
}

impl BenchmarkReport {
    pub fn row(
        &self,
        benchmark: Benchmark,
        kind: ScoreKind,
        k_set: &[usize],
    ) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.benchmark == benchmark && r.kind == kind && r.k_set == k_set)
    }

    /// Pooled extreme-point row.
    pub fn pooled(&self, benchmark: Benchmark, kind: ScoreKind) -> Option<&ReportRow> {
        self.rows
            .iter()
            .find(|r| r.benchmark == benchmark && r.kind == kind && r.pooled)
    }

    /// MEM row for one k.
    pub fn mem_row(&self, k: usize) -> Option<&ReportRow> {
        self.row(Benchmark::Mem, ScoreKind::Sweep, &[k])
    }

    /// Markdown table with one section per benchmark, metrics as columns.
    pub fn to_markdown(&self, fmt: impl Fn(f64) -> String) -> String {
        let mut out = String::new();
        let m = &self.meta;
        let _ = writeln!(out, "# Metric benchmark summary\n");
        let _ = writeln!(out, "- k set: {:?}", m.k_set);
        for (k, c) in &m.classifiers {
            let _ = writeln!(out, "- classifier (k={k}): {c}");
        }
        let mode = match m.mode {
            EstimationMode::Expectation => "expectation".to_string(),
            EstimationMode::Sampled { n, seed } => {
                format!("sampled (n={n}, seed={seed}, trials={})", m.trials)
            }
        };
        let _ = writeln!(out, "- estimation: {mode}");
        let starts = match m.starts {
            SweepStarts::All => "all AB-EPs".to_string(),
            SweepStarts::Single(i) => format!("outcome {i}"),
        };
        let _ = writeln!(out, "- sweep: step {}, starting from {starts}", m.step);
        let _ = writeln!(
            out,
            "- pool sizes: N(fair) = {}, N(AB) = {}",
            m.n_fair, m.n_ab
        );
        let _ = writeln!(
            out,
            "\nLower is better. **bold** marks the best metric in a row, _italics_ the worst.\n"
        );

        let _ = write!(out, "| Benchmark point |");
        for metric in &self.metrics {
            let _ = write!(out, " {} |", metric.title());
        }
        let _ = write!(out, "\n|---|");
        for _ in &self.metrics {
            let _ = write!(out, "---|");
        }
        out.push('\n');

        let mut section = None;
        for row in &self.rows {
            if section != Some(row.benchmark) {
                section = Some(row.benchmark);
                let _ = write!(out, "| **{}** |", row.benchmark.title());
                for _ in &self.metrics {
                    out.push_str(" |");
                }
                out.push('\n');
            }
            let label = match (row.kind, row.pooled) {
                (ScoreKind::FairEp, true) => "(Fair-EP)".to_string(),
                (ScoreKind::AbEp, true) => "(AB-EP)".to_string(),
                (ScoreKind::FairEp, false) => format!("(Fair-EP, k={})", row.k_set_label()),
                (ScoreKind::AbEp, false) => format!("(AB-EP, k={})", row.k_set_label()),
                (ScoreKind::Sweep, _) => format!("(k={} sweep)", row.k_set_label()),
            };
            let _ = write!(out, "| {label} |");
            let distinct = row.best.len() < row.values.len();
            for (metric, v) in &row.values {
                let s = fmt(*v);
                let cell = if distinct && row.best.contains(metric) {
                    format!("**{s}**")
                } else if distinct && row.worst.contains(metric) {
                    format!("_{s}_")
                } else {
                    s
                };
                let _ = write!(out, " {cell} |");
            }
            out.push('\n');
        }
        out
    }
}

/// Pools extreme-point scores over all configurations and computes MEM per
/// configuration.
pub fn summarize(
    configs: &[ExperimentConfig],
    step: f64,
    starts: SweepStarts,
) -> Result<BenchmarkReport> {
    let first = configs
        .first()
        .ok_or(Error::Empty("benchmark configuration"))?;
    let metrics = first.metrics.clone();
    if configs.iter().any(|c| c.metrics != metrics) {
        return Err(Error::param(
            "metrics",
            "all configurations must use the same metrics",
        ));
    }
    let k_set: Vec<usize> = configs.iter().map(ExperimentConfig::k).collect();
    for (i, k) in k_set.iter().enumerate() {
        if k_set[..i].contains(k) {
            return Err(Error::param("k", format!("k={k} configured twice")));
        }
    }

    let mut fair = ScoreSet::new(ScoreKind::FairEp);
    let mut ab = ScoreSet::new(ScoreKind::AbEp);
    let mut sweeps = Vec::with_capacity(configs.len());
    for c in configs {
        let (f, a) = c.run_ep_analysis()?;
        fair.extend(f)?;
        ab.extend(a)?;
        sweeps.push(c.run_sweep(step, starts)?.set);
    }

    type Stat = fn(&ScoreSet) -> Result<f64>;
    let per_metric = |set: &ScoreSet, stat: Stat| -> Result<Vec<(MetricId, f64)>> {
        metrics
            .iter()
            .map(|&m| Ok((m, stat(&set.for_metric(m))?)))
            .collect()
    };

    let mut rows = Vec::new();
    let sections: [(Benchmark, Stat, Stat); 2] = [
        (Benchmark::Mepe, mepe_fair, mepe_ab),
        (Benchmark::EpVar, ep_var, ep_var),
    ];
    for (bench, fair_stat, ab_stat) in sections {
        rows.push(ReportRow::new(
            bench,
            ScoreKind::FairEp,
            k_set.clone(),
            true,
            per_metric(&fair, fair_stat)?,
        ));
        rows.push(ReportRow::new(
            bench,
            ScoreKind::AbEp,
            k_set.clone(),
            true,
            per_metric(&ab, ab_stat)?,
        ));
        if k_set.len() > 1 {
            for &k in &k_set {
                rows.push(ReportRow::new(
                    bench,
                    ScoreKind::FairEp,
                    vec![k],
                    false,
                    per_metric(&fair.for_k(k), fair_stat)?,
                ));
                rows.push(ReportRow::new(
                    bench,
                    ScoreKind::AbEp,
                    vec![k],
                    false,
                    per_metric(&ab.for_k(k), ab_stat)?,
                ));
            }
        }
    }
    for (c, s) in configs.iter().zip(&sweeps) {
        rows.push(ReportRow::new(
            Benchmark::Mem,
            ScoreKind::Sweep,
            vec![c.k()],
            false,
            per_metric(s, mem)?,
        ));
    }

    Ok(BenchmarkReport {
        metrics,
        rows,
        meta: ReportMeta {
            classifiers: configs.iter().map(|c| (c.k(), c.label.clone())).collect(),
            n_fair: configs.len(),
            n_ab: k_set.iter().sum(),
            k_set,
            mode: first.mode,
            trials: first.effective_trials(),
            step,
            starts,
        },
    })
}
