//! Command-line and JSON configuration, merged into a validated [`RunConfig`].

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use fairdisc::bench::{SweepStarts, DEFAULT_STEP, DEFAULT_TRIALS};
use fairdisc::classifier::presets;
use fairdisc::metrics::DEFAULT_IS_ALPHA;
use fairdisc::{
    AttributeSpace, ConfusionModel, CostMatrix, EstimationMode, ExperimentConfig, MetricId,
    MetricParams,
};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::output::Precision;

pub const DEFAULT_K_SET: [usize; 4] = [2, 4, 8, 16];

/// Options shared by the experiment commands. Every field can also come
/// from a JSON file passed with `--config`; flags win over the file.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunArgs {
    /// JSON config file with any of these options
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Cardinalities, e.g. 2,4,8,16
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,

    /// Metrics: l1, l2, wd, spec, is, all
    #[arg(long, value_delimiter = ',')]
    pub metrics: Option<Vec<String>>,

    /// Attribute-space JSON file (overrides --k)
    #[arg(long)]
    pub space: Option<PathBuf>,

    /// Classifier preset (perfect, set1-a..d, set2, set2-k2..k16) or confusion-matrix JSON file
    #[arg(long)]
    pub classifier: Option<String>,

    /// Uniform label-noise rate in [0, 1]
    #[arg(long)]
    pub eps: Option<f64>,

    /// Per-class accuracies, e.g. 0.98,0.95
    #[arg(long, value_delimiter = ',')]
    pub accs: Option<Vec<f64>>,

    /// Estimation mode: expectation or sample
    #[arg(long)]
    pub mode: Option<String>,

    /// Samples per estimate in sample mode
    #[arg(long)]
    pub n: Option<usize>,

    /// Base seed in sample mode
    #[arg(long)]
    pub seed: Option<u64>,

    /// Repeated trials per cell in sample mode
    #[arg(long)]
    pub trials: Option<usize>,

    /// Sweep step in probability units
    #[arg(long)]
    pub step: Option<f64>,

    /// Sweep starting AB-EP: an outcome index or `all`
    #[arg(long)]
    pub start: Option<String>,

    /// Information-specificity mixing weight
    #[arg(long)]
    pub alpha: Option<f64>,

    /// WD ground-cost JSON file, or `default`
    #[arg(long)]
    pub cost: Option<String>,

    /// CSV output path (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Markdown report path (bench only)
    #[arg(long)]
    pub markdown: Option<PathBuf>,

    /// Significant digits in CSV output, or `full`
    #[arg(long)]
    pub precision: Option<String>,
}

macro_rules! merge_fields {
    ($dst:ident, $src:ident; $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f; } )*
    };
}

impl RunArgs {
    /// Fills unset flags from the `--config` file, if any.
    pub fn merged(mut self) -> CliResult<RunArgs> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let file: RunArgs = read_json(&path)?;
        merge_fields!(self, file; k, metrics, space, classifier, eps, accs, mode, n, seed,
            trials, step, start, alpha, cost, out, markdown, precision);
        Ok(self)
    }
}

pub fn read_to_string(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

/// How to build the confusion model for each `k`.
#[derive(Debug, Clone, PartialEq)]
pub enum ClassifierSpec {
    Preset(String),
    Matrix(ConfusionModel),
    Accuracies(Vec<f64>),
    Noise(f64),
}

impl ClassifierSpec {
    pub fn model(&self, k: usize) -> CliResult<ConfusionModel> {
        let model = match self {
            ClassifierSpec::Preset(name) => presets::resolve(name, k)?,
            ClassifierSpec::Matrix(m) => m.clone(),
            ClassifierSpec::Accuracies(a) => ConfusionModel::from_accuracies(a)?,
            ClassifierSpec::Noise(eps) => ConfusionModel::uniform_noise(k, *eps)?,
        };
        if model.k() != k {
            return Err(CliError::invalid(format!(
                "classifier has k={}, but k={k} was requested",
                model.k()
            )));
        }
        Ok(model)
    }

    pub fn label(&self, k: usize) -> String {
        match self {
            ClassifierSpec::Preset(name) if name == "set2" => format!("set2-k{k}"),
            ClassifierSpec::Preset(name) => name.clone(),
            ClassifierSpec::Matrix(_) => "confusion matrix file".into(),
            ClassifierSpec::Accuracies(a) => format!(
                "accuracies [{}]",
                a.iter().map(f64::to_string).collect::<Vec<_>>().join(", ")
            ),
            ClassifierSpec::Noise(eps) => format!("uniform noise eps={eps}"),
        }
    }
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub spaces: Vec<AttributeSpace>,
    pub metrics: Vec<MetricId>,
    pub classifier: ClassifierSpec,
    pub mode: EstimationMode,
    pub trials: usize,
    pub step: f64,
    pub start: Option<SweepStarts>,
    pub params: MetricParams,
    pub out: Option<PathBuf>,
    pub markdown: Option<PathBuf>,
    pub precision: Precision,
}

impl RunConfig {
    pub fn from_args(args: RunArgs) -> CliResult<Self> {
        let args = args.merged()?;

        let spaces = match &args.space {
            Some(path) => vec![read_json::<AttributeSpace>(path)?],
            None => {
                let ks = args.k.clone().unwrap_or_else(|| DEFAULT_K_SET.to_vec());
                if ks.is_empty() {
                    return Err(CliError::invalid("k set is empty"));
                }
                let mut spaces = Vec::with_capacity(ks.len());
                for (i, &k) in ks.iter().enumerate() {
                    if ks[..i].contains(&k) {
                        return Err(CliError::invalid(format!("k={k} given twice")));
                    }
                    spaces.push(
                        AttributeSpace::with_cardinality(k)
                            .map_err(|e| CliError::invalid(format!("invalid k={k}: {e}")))?,
                    );
                }
                spaces
            }
        };

        let metrics = match &args.metrics {
            Some(list) => MetricId::parse_list(&list.join(","))?,
            None => MetricId::ALL.to_vec(),
        };

        let classifier = {
            let given = [
                args.classifier.is_some(),
                args.eps.is_some(),
                args.accs.is_some(),
            ];
            if given.iter().filter(|g| **g).count() > 1 {
                return Err(CliError::invalid(
                    "use only one of --classifier, --eps and --accs",
                ));
            }
            if let Some(eps) = args.eps {
                ClassifierSpec::Noise(eps)
            } else if let Some(accs) = &args.accs {
                ClassifierSpec::Accuracies(accs.clone())
            } else {
                match args.classifier.as_deref() {
                    None => ClassifierSpec::Preset("perfect".into()),
                    Some(name) if is_preset(name) => ClassifierSpec::Preset(name.into()),
                    Some(path) if looks_like_path(path) => {
                        ClassifierSpec::Matrix(read_json(Path::new(path))?)
                    }
                    Some(other) => {
                        return Err(CliError::invalid(format!(
                            "unknown classifier preset `{other}` (expected perfect, set2, {})",
                            presets::names().collect::<Vec<_>>().join(", ")
                        )))
                    }
                }
            }
        };

        let mode = match args.mode.as_deref().unwrap_or("expectation") {
            "expectation" | "expect" => EstimationMode::Expectation,
            "sample" | "sampled" => EstimationMode::Sampled {
                n: args
                    .n
                    .ok_or_else(|| CliError::invalid("sample mode requires --n"))?,
                seed: args.seed.unwrap_or(0),
            },
            other => {
                return Err(CliError::invalid(format!(
                    "unknown mode `{other}` (expected expectation or sample)"
                )))
            }
        };
        mode.validate()?;

        let trials = args.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return Err(CliError::invalid("--trials must be >= 1"));
        }

        let step = args.step.unwrap_or(DEFAULT_STEP);
        let start = match args.start.as_deref() {
            None => None,
            Some("all") => Some(SweepStarts::All),
            Some(s) => Some(SweepStarts::Single(s.parse().map_err(|_| {
                CliError::invalid(format!(
                    "--start must be an outcome index or `all`, got `{s}`"
                ))
            })?)),
        };

        let cost = match args.cost.as_deref() {
            None | Some("default") => None,
            Some(path) => Some(read_json::<CostMatrix>(Path::new(path))?),
        };
        let params = MetricParams {
            alpha: args.alpha.unwrap_or(DEFAULT_IS_ALPHA),
            cost,
        };
        params.validate()?;

        let precision = match &args.precision {
            Some(p) => p.parse()?,
            None => Precision::default(),
        };

        let config = RunConfig {
            spaces,
            metrics,
            classifier,
            mode,
            trials,
            step,
            start,
            params,
            out: args.out,
            markdown: args.markdown,
            precision,
        };
        // Surface classifier/k mismatches before any work is done.
        config.experiments()?;
        Ok(config)
    }

    pub fn k_set(&self) -> Vec<usize> {
        self.spaces.iter().map(AttributeSpace::k).collect()
    }

    pub fn experiments(&self) -> CliResult<Vec<ExperimentConfig>> {
        self.spaces
            .iter()
            .map(|space| {
                let k = space.k();
                let mut c =
                    ExperimentConfig::new(space.clone(), self.classifier.model(k)?, self.mode);
                c.label = self.classifier.label(k);
                c.metrics = self.metrics.clone();
                c.trials = self.trials;
                c.params = self.params.clone();
                Ok(c)
            })
            .collect()
    }
}

fn is_preset(name: &str) -> bool {
    name == "perfect" || name == "set2" || presets::names().any(|p| p == name)
}

fn looks_like_path(s: &str) -> bool {
    s.contains('/') || s.contains('\\') || s.ends_with(".json") || Path::new(s).exists()
}
