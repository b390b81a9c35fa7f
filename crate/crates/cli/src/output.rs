use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{CliError, CliResult};

/// Number formatting for CSV and Markdown output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Significant(usize),
    /// Shortest representation that round-trips.
    Full,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Significant(6)
    }
}

impl FromStr for Precision {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        if s == "full" {
            return Ok(Precision::Full);
        }
        match s.parse::<usize>() {
            Ok(n) if (1..=17).contains(&n) => Ok(Precision::Significant(n)),
            _ => Err(CliError::invalid(format!(
                "--precision must be 1..=17 or `full`, got `{s}`"
            ))),
        }
    }
}

impl Precision {
    pub fn format(self, x: f64) -> String {
        let sig = match self {
            Precision::Full => return format!("{x}"),
            Precision::Significant(n) => n,
        };
        if x == 0.0 || !x.is_finite() {
            return format!("{}", if x == 0.0 { 0.0 } else { x });
        }
        let mag = x.abs().log10().floor() as i32;
        if !(-4..15).contains(&mag) {
            return format!("{:.*e}", sig - 1, x);
        }
        let decimals = (sig as i32 - 1 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        let s = if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        };
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    }
}

/// Output sink: a file when a path is given, stdout otherwise.
pub struct Sink {
    path: Option<PathBuf>,
    inner: Box<dyn Write>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> CliResult<Self> {
        let inner: Box<dyn Write> = match path {
            Some(p) => Box::new(BufWriter::new(
                File::create(p).map_err(|e| CliError::io(p, e))?,
            )),
            None => Box::new(BufWriter::new(io::stdout())),
        };
        Ok(Sink {
            path: path.map(Path::to_path_buf),
            inner,
        })
    }

    fn label(&self) -> PathBuf {
        self.path
            .clone()
            .unwrap_or_else(|| PathBuf::from("<stdout>"))
    }

    pub fn write_all(&mut self, text: &str) -> CliResult<()> {
        self.inner
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(self.label(), e))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.inner
            .flush()
            .map_err(|e| CliError::io(self.label(), e))
    }
}

/// Renders rows of string cells as CSV.
pub fn csv_string(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e: csv::Error| CliError::invalid(format!("csv: {e}"));
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.write_record(r).map_err(wrap)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::invalid(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::invalid(format!("csv: {e}")))
}

pub fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    let mut sink = Sink::open(path)?;
    sink.write_all(text)?;
    sink.finish()
}
