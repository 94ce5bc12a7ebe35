use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{ExperimentSpec, ResultRow};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::invalid(format!(
                "unknown output format {other:?}; expected json or csv"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

/// The JSON document: experiment name, the [`ExperimentSpec`] that produced it and its rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub experiment: String,
    pub params: ExperimentSpec,
    pub results: Vec<ResultRow>,
}

pub fn render(rows: &[ResultRow], spec: &ExperimentSpec, format: OutputFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::invalid("no result rows to emit"));
    }
    match format {
        OutputFormat::Json => {
            let doc = ExperimentOutput {
                experiment: format!("{}-{}", spec.application, spec.dataset.name()),
                params: spec.clone(),
                results: rows.to_vec(),
            };
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            Ok(text)
        }
        OutputFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in rows {
                writer.serialize(row)?;
            }
            let bytes = writer
                .into_inner()
                .map_err(|e| Error::invalid(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

/// Writes rendered rows to `path`, or to standard output when `path` is `None`.
pub fn emit(
    rows: &[ResultRow],
    spec: &ExperimentSpec,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<()> {
    let text = render(rows, spec, format)?;
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn parse_json_output(text: &str) -> Result<ExperimentOutput> {
    Ok(serde_json::from_str(text)?)
}

pub fn parse_csv_rows(text: &str) -> Result<Vec<ResultRow>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    Ok(reader
        .deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()?)
}
