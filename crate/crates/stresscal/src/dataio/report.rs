//! Report writing with deterministic bytes.
//!
//! JSON reports are rendered through a sorted-key value tree, so the same
//! report always produces the same file content; floats use the shortest
//! representation that round-trips exactly. CSV output is driven by the
//! [`CsvReport`] trait that report types implement.

use std::fmt;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

/// Output format of a report file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ReportFormat::Csv => write!(f, "csv"),
            ReportFormat::Json => write!(f, "json"),
        }
    }
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Usage(format!(
                "unknown report format '{other}' (expected csv or json)"
            ))),
        }
    }
}

/// Tabular rendering of a report for CSV output.
pub trait CsvReport {
    fn csv_header(&self) -> Vec<String>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

/// Serialize any report as deterministic pretty JSON (sorted keys,
/// newline-terminated).
///
/// # Errors
/// Serialization errors (e.g. non-finite floats).
pub fn json_string<T: Serialize>(report: &T) -> Result<String> {
    let value = serde_json::to_value(report)?;
    let mut rendered = serde_json::to_string_pretty(&value)?;
    rendered.push('\n');
    Ok(rendered)
}

/// Write `report` to `path` in the requested format.
///
/// # Errors
/// I/O and serialization errors.
pub fn write_report<T: Serialize + CsvReport>(
    path: &Path,
    format: ReportFormat,
    report: &T,
) -> Result<()> {
    match format {
        ReportFormat::Json => {
            fs::write(path, json_string(report)?)?;
        }
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_path(path)?;
            writer.write_record(report.csv_header())?;
            for row in report.csv_rows() {
                writer.write_record(&row)?;
            }
            writer.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize)]
    struct Sample {
        zeta: f64,
        alpha: u32,
        middle: Vec<f64>,
    }

    impl CsvReport for Sample {
        fn csv_header(&self) -> Vec<String> {
            vec!["alpha".into(), "zeta".into()]
        }
        fn csv_rows(&self) -> Vec<Vec<String>> {
            vec![vec![self.alpha.to_string(), format!("{}", self.zeta)]]
        }
    }

    fn sample() -> Sample {
        Sample {
            zeta: 0.1 + 0.2,
            alpha: 7,
            middle: vec![1.0, 2.5],
        }
    }

    #[test]
    fn json_keys_are_sorted_and_bytes_are_stable() {
        let a = json_string(&sample()).unwrap();
        let b = json_string(&sample()).unwrap();
        assert_eq!(a, b);
        assert!(a.find("\"alpha\"").unwrap() < a.find("\"middle\"").unwrap());
        assert!(a.find("\"middle\"").unwrap() < a.find("\"zeta\"").unwrap());
        assert!(a.ends_with('\n'));
    }

    #[test]
    fn json_floats_round_trip_exactly() {
        let rendered = json_string(&sample()).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&rendered).unwrap();
        assert_eq!(parsed["zeta"].as_f64().unwrap(), 0.1 + 0.2);
    }

    #[test]
    fn report_format_parses_and_rejects() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert_eq!("JSON".parse::<ReportFormat>().unwrap(), ReportFormat::Json);
        let err = "yaml".parse::<ReportFormat>().unwrap_err();
        assert!(matches!(err, Error::Usage(_)));
    }

    #[test]
    fn write_report_emits_both_formats() {
        let dir = tempfile::tempdir().unwrap();
        let json_path = dir.path().join("r.json");
        let csv_path = dir.path().join("r.csv");
        write_report(&json_path, ReportFormat::Json, &sample()).unwrap();
        write_report(&csv_path, ReportFormat::Csv, &sample()).unwrap();
        let json = fs::read_to_string(&json_path).unwrap();
        assert!(json.contains("\"alpha\": 7"));
        let csv = fs::read_to_string(&csv_path).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "alpha,zeta");
        assert!(lines.next().unwrap().starts_with("7,0.30000000000000004"));
    }
}
