use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::cv::CvResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Text,
    Csv,
    /// JSON array of results.
    Structured,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Self::Text),
            "csv" => Ok(Self::Csv),
            "structured" | "json" => Ok(Self::Structured),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

fn hyper_column(r: &CvResult) -> String {
    r.chosen_hyperparams
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(";")
}

fn csv_report(results: &[CvResult]) -> Result<String> {
    let folds = results.iter().map(|r| r.fold_accuracies.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["label", "n_classes", "k_folds", "mean", "std", "sem", "max", "min"]
        .map(String::from)
        .to_vec();
    header.extend((1..=folds).map(|i| format!("fold_{i}")));
    header.push("hyperparams".into());
    w.write_record(&header)?;
    for r in results {
        let mut row = vec![
            r.label.clone(),
            r.n_classes.to_string(),
            r.fold_accuracies.len().to_string(),
            r.mean.to_string(),
            r.std.to_string(),
            r.sem.to_string(),
            r.max.to_string(),
            r.min.to_string(),
        ];
        row.extend((0..folds).map(|i| r.fold_accuracies.get(i).map(ToString::to_string).unwrap_or_default()));
        row.push(hyper_column(r));
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn text_report(results: &[CvResult]) -> String {
    let width = results.iter().map(|r| r.label.len()).max().unwrap_or(0).max(7);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>7}  {:>7}  {:>7}  {:>7}  {:>7}  hyperparams (n_rf/k_bag/hidden)",
        "dataset", "mean", "std", "sem", "max", "min"
    );
    for r in results {
        let _ = writeln!(
            out,
            "{:<width$}  {:>7.4}  {:>7.4}  {:>7.4}  {:>7.4}  {:>7.4}  {}",
            r.label,
            r.mean,
            r.std,
            r.sem,
            r.max,
            r.min,
            hyper_column(r)
        );
        let folds: Vec<String> = r.fold_accuracies.iter().map(|a| format!("{a:.4}")).collect();
        let _ = writeln!(out, "{:<width$}  folds: {}", "", folds.join(" "));
    }
    out
}

/// Renders results as an aligned table, CSV with a header row, or JSON.
/// CSV and JSON carry every field at full precision.
pub fn report(results: &[CvResult], format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Text => Ok(text_report(results)),
        ReportFormat::Csv => csv_report(results),
        ReportFormat::Structured => Ok(serde_json::to_string_pretty(results)?),
    }
}

pub fn parse_structured(doc: &str) -> Result<Vec<CvResult>> {
    Ok(serde_json::from_str(doc)?)
}
