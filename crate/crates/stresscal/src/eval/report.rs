//! CSV renderings and one-line text summaries of the report types.

use crate::dataio::CsvReport;

use super::{CalibrationCurve, EvaluationReport, Metrics, ProbeReport};

fn metric_names(metrics: &Metrics) -> Vec<String> {
    metrics
        .fields()
        .iter()
        .map(|(n, _)| n.to_string())
        .collect()
}

fn metric_values(metrics: &Metrics) -> Vec<String> {
    metrics
        .fields()
        .iter()
        .map(|(_, v)| format!("{v}"))
        .collect()
}

/// `accuracy 0.952 ± 0.005, precision …` — mean ± std, field by field.
fn mean_std_text(mean: &Metrics, std: &Metrics) -> String {
    mean.fields()
        .iter()
        .zip(std.fields())
        .map(|((name, m), (_, s))| format!("{name} {m:.4} ± {s:.4}"))
        .collect::<Vec<_>>()
        .join(", ")
}

impl EvaluationReport {
    /// Human-readable one-liner echoing the aggregate numbers.
    pub fn summary(&self) -> String {
        format!(
            "{} [{}] over {} units: {}",
            self.protocol,
            self.scope,
            self.units.len(),
            mean_std_text(&self.mean, &self.std)
        )
    }
}

impl CsvReport for EvaluationReport {
    fn csv_header(&self) -> Vec<String> {
        let mut header = vec!["unit".to_string(), "n_test_rows".to_string()];
        header.extend(metric_names(&self.mean));
        header
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::with_capacity(self.units.len() + 2);
        for unit in &self.units {
            let mut row = vec![unit.unit.clone(), unit.n_test_rows.to_string()];
            row.extend(metric_values(&unit.metrics));
            rows.push(row);
        }
        let mut mean = vec!["mean".to_string(), String::new()];
        mean.extend(metric_values(&self.mean));
        rows.push(mean);
        let mut std = vec!["std".to_string(), String::new()];
        std.extend(metric_values(&self.std));
        rows.push(std);
        rows
    }
}

impl CalibrationCurve {
    /// One line per sweep size.
    pub fn summary(&self) -> String {
        let mut lines = vec![format!(
            "{} over held-out subjects [{}]:",
            self.protocol,
            self.held_out_subjects.join(", ")
        )];
        for point in &self.points {
            lines.push(format!(
                "  s = {:>4} ({} rows): {}",
                point.size,
                point.n_calibration_rows,
                mean_std_text(&point.mean, &point.std)
            ));
        }
        lines.join("\n")
    }
}

impl CsvReport for CalibrationCurve {
    fn csv_header(&self) -> Vec<String> {
        let mut header = vec![
            "size".to_string(),
            "n_calibration_rows".to_string(),
            "unit".to_string(),
            "n_test_rows".to_string(),
        ];
        if let Some(point) = self.points.first() {
            header.extend(metric_names(&point.mean));
        }
        header
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let mut rows = Vec::new();
        for point in &self.points {
            for unit in &point.units {
                let mut row = vec![
                    point.size.to_string(),
                    point.n_calibration_rows.to_string(),
                    unit.unit.clone(),
                    unit.n_test_rows.to_string(),
                ];
                row.extend(metric_values(&unit.metrics));
                rows.push(row);
            }
            let mut mean = vec![
                point.size.to_string(),
                point.n_calibration_rows.to_string(),
                "mean".to_string(),
                String::new(),
            ];
            mean.extend(metric_values(&point.mean));
            rows.push(mean);
            let mut std = vec![
                point.size.to_string(),
                point.n_calibration_rows.to_string(),
                "std".to_string(),
                String::new(),
            ];
            std.extend(metric_values(&point.std));
            rows.push(std);
        }
        rows
    }
}

impl ProbeReport {
    /// Headline plus the top of the ranking.
    pub fn summary(&self) -> String {
        let mut lines = vec![format!(
            "{}: probe column ranked {} of {}",
            self.protocol,
            self.probe_rank,
            self.ranking.len()
        )];
        for feature in self.ranking.iter().take(10) {
            lines.push(format!(
                "  #{:<3} {:<16} {:.6}",
                feature.rank, feature.name, feature.importance
            ));
        }
        lines.join("\n")
    }
}

impl CsvReport for ProbeReport {
    fn csv_header(&self) -> Vec<String> {
        vec!["rank".into(), "feature".into(), "importance".into()]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.ranking
            .iter()
            .map(|f| {
                vec![
                    f.rank.to_string(),
                    f.name.clone(),
                    format!("{}", f.importance),
                ]
            })
            .collect()
    }
}
