use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, ModelKind};
use crate::error::{Error, Result};
use crate::metrics::MetricResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: String,
    pub model: ModelKind,
    pub train: Option<MetricResult>,
    pub test: Option<MetricResult>,
    /// Test MAE minus the base case's test MAE, MVA·s.
    pub delta_mae: Option<f64>,
    pub error: Option<String>,
}

impl ReportRow {
    pub fn failed(cfg: &ExperimentConfig, err: &Error) -> Self {
        ReportRow {
            id: cfg.id.clone(),
            model: cfg.model,
            train: None,
            test: None,
            delta_mae: None,
            error: Some(err.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub base_case: Option<String>,
    pub rows: Vec<ReportRow>,
}

pub const CSV_COLUMNS: [&str; 13] = [
    "id",
    "model",
    "status",
    "train_mape",
    "test_mape",
    "train_smape",
    "test_smape",
    "train_mae",
    "test_mae",
    "delta_mae",
    "n_train",
    "n_test",
    "error",
];

fn fixed(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_default()
}

impl BenchmarkReport {
    pub fn row(&self, id: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.id == id)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.is_ok()).count()
    }

    /// Fills `delta_mae` when the base case is present and succeeded.
    pub fn compute_deltas(&mut self) {
        let base_mae = self
            .base_case
            .as_deref()
            .and_then(|id| self.row(id))
            .and_then(|r| r.test)
            .map(|m| m.mae);
        for row in &mut self.rows {
            row.delta_mae = match (base_mae, row.test) {
                (Some(b), Some(t)) => Some(t.mae - b),
                _ => None,
            };
        }
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serde(e.to_string());
        w.write_record(CSV_COLUMNS).map_err(ser)?;
        for r in &self.rows {
            let count =
                |m: Option<MetricResult>| m.map(|m| m.n_points.to_string()).unwrap_or_default();
            w.write_record([
                r.id.clone(),
                r.model.name().to_string(),
                if r.is_ok() { "ok" } else { "failed" }.to_string(),
                fixed(r.train.map(|m| m.mape)),
                fixed(r.test.map(|m| m.mape)),
                fixed(r.train.map(|m| m.smape)),
                fixed(r.test.map(|m| m.smape)),
                fixed(r.train.map(|m| m.mae)),
                fixed(r.test.map(|m| m.mae)),
                fixed(r.delta_mae),
                count(r.train),
                count(r.test),
                r.error.clone().unwrap_or_default(),
            ])
            .map_err(ser)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Serde(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serde(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serde(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!("unknown report format {other:?}"))),
        }
    }
}

pub fn emit_report(
    report: &BenchmarkReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let text = match format {
        ReportFormat::Csv => report.to_csv()?,
        ReportFormat::Json => report.to_json()?,
    };
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn metric(mape: f64) -> MetricResult {
        MetricResult {
            mape,
            smape: mape * 1.01,
            mae: mape * 2000.0,
            n_points: 24,
        }
    }

    fn row(id: &str, mape: f64) -> ReportRow {
        ReportRow {
            id: id.into(),
            model: ModelKind::Explanatory,
            train: Some(metric(mape - 0.1)),
            test: Some(metric(mape)),
            delta_mae: None,
            error: None,
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        let csv = BenchmarkReport::default().to_csv().unwrap();
        assert_eq!(csv.lines().count(), 1);
        assert_eq!(csv.trim_end(), CSV_COLUMNS.join(","));
    }

    #[test]
    fn one_row_is_two_lines_with_three_decimals() {
        let report = BenchmarkReport {
            base_case: None,
            rows: vec![row("a", 4.420123456)],
        };
        let csv = report.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 2);
        assert!(csv.lines().nth(1).unwrap().contains(",4.420,"));
        assert_eq!(csv, report.to_csv().unwrap());
    }

    #[test]
    fn deltas_need_the_base_case() {
        let mut report = BenchmarkReport {
            base_case: Some("a".into()),
            rows: vec![row("a", 4.0), row("b", 5.0)],
        };
        report.compute_deltas();
        assert_eq!(report.rows[0].delta_mae, Some(0.0));
        assert!((report.rows[1].delta_mae.unwrap() - 2000.0).abs() < 1e-9);
        report.base_case = Some("missing".into());
        report.compute_deltas();
        assert!(report.rows.iter().all(|r| r.delta_mae.is_none()));
    }

    #[test]
    fn json_then_csv_keeps_three_decimals() {
        let report = BenchmarkReport {
            base_case: None,
            rows: vec![row("a", 4.5049999), row("b", 3.8700001)],
        };
        let back = BenchmarkReport::from_json(&report.to_json().unwrap()).unwrap();
        assert_eq!(back, report);
        let text = back.to_csv().unwrap();
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let mapes: Vec<f64> = rdr
            .records()
            .map(|r| r.unwrap()[4].parse().unwrap())
            .collect();
        for (parsed, r) in mapes.iter().zip(&report.rows) {
            assert!((parsed - r.test.unwrap().mape).abs() <= 0.0005 + 1e-12);
        }
    }

    #[test]
    fn failed_rows_are_marked() {
        let cfg = ExperimentConfig::new(
            "x",
            ModelKind::Baseline,
            "2019-01-01/2019-02-01/2019-02-01/2019-03-01"
                .parse()
                .unwrap(),
        );
        let report = BenchmarkReport {
            base_case: None,
            rows: vec![ReportRow::failed(
                &cfg,
                &Error::Fit("boom, with comma".into()),
            )],
        };
        assert_eq!(report.failures(), 1);
        let csv = report.to_csv().unwrap();
        assert!(csv.contains("failed"));
        assert!(csv.contains("\"fit error: boom, with comma\""));
    }
}
