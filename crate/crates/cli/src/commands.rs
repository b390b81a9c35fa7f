use std::io::BufRead;
use std::path::{Path, PathBuf};

use clap::Args;
use fairdisc::bench::{self, SweepStarts};
use fairdisc::classifier::{ingest_predictions, Ingested};
use fairdisc::{
    AttributeSpace, CategoricalDistribution, CostMatrix, MetricId, MetricParams, PredictionRecord,
    Scorer,
};
use serde::{Deserialize, Serialize};

use crate::config::{read_json, read_to_string, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{csv_string, write_text, Precision};

pub fn nfactor(cfg: &RunConfig) -> CliResult<String> {
    let mut rows = Vec::new();
    for space in &cfg.spaces {
        let k = space.k();
        let scorer = Scorer::new(k, cfg.params.clone())?;
        for &m in &cfg.metrics {
            rows.push(vec![
                m.name().into(),
                k.to_string(),
                cfg.precision.format(scorer.n_factor(m)),
            ]);
        }
    }
    csv_string(&["metric", "k", "n_factor"], &rows)
}

pub fn ep(cfg: &RunConfig) -> CliResult<String> {
    let mut rows = Vec::new();
    for c in cfg.experiments()? {
        let (fair, ab) = c.run_ep_analysis()?;
        for set in [fair, ab] {
            for e in &set.entries {
                rows.push(vec![
                    e.k.to_string(),
                    set.kind.name().into(),
                    e.point.to_string(),
                    e.trial.to_string(),
                    e.metric.name().into(),
                    cfg.precision.format(e.f),
                ]);
            }
        }
    }
    csv_string(&["k", "kind", "point", "trial", "metric", "score"], &rows)
}

pub fn sweep(cfg: &RunConfig) -> CliResult<String> {
    let starts = cfg.start.unwrap_or(SweepStarts::Single(0));
    let mut rows = Vec::new();
    for c in cfg.experiments()? {
        let run = c.run_sweep(cfg.step, starts)?;
        for e in &run.set.entries {
            let f_star = e.f_star.unwrap_or(f64::NAN);
            rows.push(vec![
                e.k.to_string(),
                e.point.to_string(),
                e.trial.to_string(),
                e.epoch.map_or_else(String::new, |n| n.to_string()),
                e.metric.name().into(),
                cfg.precision.format(e.f),
                cfg.precision.format(f_star),
                cfg.precision.format((e.f - f_star).abs()),
            ]);
        }
    }
    csv_string(
        &[
            "k",
            "start",
            "trial",
            "epoch",
            "metric",
            "f",
            "f_star",
            "abs_error",
        ],
        &rows,
    )
}

/// Returns `(csv, markdown)`.
pub fn bench(cfg: &RunConfig) -> CliResult<(String, String)> {
    let starts = cfg.start.unwrap_or(SweepStarts::All);
    let report = bench::summarize(&cfg.experiments()?, cfg.step, starts)?;
    let mut rows = Vec::new();
    for r in &report.rows {
        for (m, v) in &r.values {
            rows.push(vec![
                r.benchmark.name().into(),
                r.kind.name().into(),
                r.k_set_label(),
                m.name().into(),
                cfg.precision.format(*v),
            ]);
        }
    }
    let k_label = report
        .rows
        .first()
        .map(|r| r.k_set_label())
        .unwrap_or_default();
    for (kind, n) in [("fair", report.meta.n_fair), ("ab", report.meta.n_ab)] {
        rows.push(vec![
            "pool_size".into(),
            kind.into(),
            k_label.clone(),
            "all".into(),
            n.to_string(),
        ]);
    }
    let csv = csv_string(&["benchmark", "kind", "k_set", "metric", "value"], &rows)?;
    let precision = cfg.precision;
    let md = report.to_markdown(|x| precision.format(x));
    Ok((csv, md))
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// Distribution JSON: an array of probabilities, or {"space": ..., "p": [...]}
    pub input: Option<PathBuf>,

    /// Inline distribution, e.g. 0.9,0.1
    #[arg(long, value_delimiter = ',', conflicts_with = "input")]
    pub p: Option<Vec<f64>>,

    /// Metrics: l1, l2, wd, spec, is, all
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub metrics: Vec<String>,

    /// Print only the unnormalized value
    #[arg(long)]
    pub raw: bool,

    #[arg(long)]
    pub alpha: Option<f64>,

    /// WD ground-cost JSON file
    #[arg(long)]
    pub cost: Option<PathBuf>,

    #[arg(long, default_value = "6")]
    pub precision: String,

    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum DistFile {
    Bare(Vec<f64>),
    WithSpace {
        #[serde(default)]
        space: Option<AttributeSpace>,
        p: Vec<f64>,
    },
}

pub fn score(args: &ScoreArgs) -> CliResult<String> {
    let p = match (&args.p, &args.input) {
        (Some(p), _) => CategoricalDistribution::new(p.clone())?,
        (None, Some(path)) => match read_json::<DistFile>(path)? {
            DistFile::Bare(p) => CategoricalDistribution::new(p)?,
            DistFile::WithSpace { space: Some(s), p } => CategoricalDistribution::on(&s, p)?,
            DistFile::WithSpace { space: None, p } => CategoricalDistribution::new(p)?,
        },
        (None, None) => return Err(CliError::invalid("give a distribution file or --p")),
    };
    let metrics = MetricId::parse_list(&args.metrics.join(","))?;
    let precision: Precision = args.precision.parse()?;
    let mut params = MetricParams::default();
    if let Some(a) = args.alpha {
        params.alpha = a;
    }
    if let Some(path) = &args.cost {
        params.cost = Some(read_json::<CostMatrix>(path)?);
    }
    let k = p.k();
    let scorer = Scorer::new(k, params)?;
    let mut rows = Vec::new();
    for m in metrics {
        let s = scorer.score(m, &p)?;
        let mut row = vec![m.name().into(), k.to_string(), precision.format(s.raw)];
        if !args.raw {
            row.push(precision.format(s.n_factor));
            row.push(precision.format(s.normalized));
        }
        rows.push(row);
    }
    let header: &[&str] = if args.raw {
        &["metric", "k", "raw"]
    } else {
        &["metric", "k", "raw", "n_factor", "normalized"]
    };
    csv_string(header, &rows)
}

#[derive(Debug, Clone, Args)]
pub struct IngestArgs {
    /// Predictions in JSON Lines format
    pub predictions: PathBuf,

    /// Attribute-space JSON file
    #[arg(long)]
    pub space: PathBuf,

    /// Where to write the estimated distribution (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Where to write the empirical confusion matrix, when truth labels allow one
    #[arg(long)]
    pub confusion_out: Option<PathBuf>,
}

#[derive(Serialize)]
struct IngestSummary<'a> {
    records: usize,
    soft: bool,
    p: &'a CategoricalDistribution,
}

/// Parses JSONL, skipping blank lines. Errors name the 1-based line.
pub fn read_predictions(path: &Path) -> CliResult<(Vec<PredictionRecord>, Vec<usize>)> {
    let text = read_to_string(path)?;
    let mut records = Vec::new();
    let mut lines = Vec::new();
    for (i, line) in text.as_bytes().lines().enumerate() {
        let line = line.map_err(|e| CliError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: PredictionRecord = serde_json::from_str(&line).map_err(|e| {
            CliError::invalid(format!(
                "{}:{}: malformed record: {e}",
                path.display(),
                i + 1
            ))
        })?;
        records.push(rec);
        lines.push(i + 1);
    }
    Ok((records, lines))
}

pub fn ingest(args: &IngestArgs) -> CliResult<(String, Option<String>)> {
    let space: AttributeSpace = read_json(&args.space)?;
    let (records, lines) = read_predictions(&args.predictions)?;
    let result: Ingested = ingest_predictions(&space, records).map_err(|e| {
        let line = match &e {
            fairdisc::Error::MixedPredictions { record }
            | fairdisc::Error::OutcomeOutOfRange { record, .. }
            | fairdisc::Error::InvalidRecord { record, .. } => lines.get(*record).copied(),
            _ => None,
        };
        match line {
            Some(n) => CliError::invalid(format!("{}:{n}: {e}", args.predictions.display())),
            None => CliError::invalid(format!("{}: {e}", args.predictions.display())),
        }
    })?;
    let summary = IngestSummary {
        records: result.records,
        soft: result.soft,
        p: &result.estimated,
    };
    let json = to_json(&summary)?;
    let confusion = result.confusion.as_ref().map(to_json).transpose()?;
    Ok((json, confusion))
}

fn to_json<T: Serialize>(v: &T) -> CliResult<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| CliError::invalid(format!("json: {e}")))
}

pub fn write_ingest(args: &IngestArgs) -> CliResult<()> {
    let (json, confusion) = ingest(args)?;
    write_text(args.out.as_deref(), &json)?;
    match (&args.confusion_out, confusion) {
        (Some(path), Some(c)) => write_text(Some(path), &c),
        (Some(_), None) => {
            eprintln!(
                "warning: no confusion matrix written; it needs a truth label on every record and every outcome present"
            );
            Ok(())
        }
        (None, _) => Ok(()),
    }
}
