use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::RunRecord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    #[serde(alias = "markdown")]
    Md,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "md" | "markdown" => Ok(Self::Md),
            other => Err(Error::Config(format!("unknown output format {other:?} (expected csv, json or md)"))),
        }
    }
}

fn epoch_columns(records: &[RunRecord]) -> usize {
    records.iter().map(|r| r.ep_accuracies.len()).max().unwrap_or(0).max(1)
}

pub fn render_csv(records: &[RunRecord]) -> Result<String> {
    let epochs = epoch_columns(records);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["dataset", "encoding", "axis", "N", "M"].map(String::from).to_vec();
    header.extend((1..=epochs).map(|i| format!("ep{i}")));
    header.extend(["test", "f1", "seed", "wall_time_s"].map(String::from));
    w.write_record(&header).map_err(csv_error)?;

    for r in records {
        let mut row = vec![
            r.dataset.clone(),
            r.encoding.token().to_string(),
            r.axis.map(|a| a.to_string()).unwrap_or_default(),
            r.n.to_string(),
            r.m.to_string(),
        ];
        let metric = |v: f64| if r.is_ok() { v.to_string() } else { String::new() };
        row.extend((0..epochs).map(|i| r.ep_accuracies.get(i).map(|&v| metric(v)).unwrap_or_default()));
        row.push(metric(r.test_accuracy));
        row.push(metric(r.f1));
        row.push(r.seed.to_string());
        row.push(r.wall_time_s.to_string());
        w.write_record(&row).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Output(e.to_string()))
}

fn csv_error(e: csv::Error) -> Error {
    Error::Output(e.to_string())
}

pub fn render_json(records: &[RunRecord]) -> Result<String> {
    serde_json::to_string_pretty(records).map_err(|e| Error::Output(e.to_string()))
}

pub fn parse_json(text: &str) -> Result<Vec<RunRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Input(format!("invalid result json: {e}")))
}

/// One table per (dataset, N, M) in first-seen order, one row per encoding.
/// The best F1 in each table is bold.
pub fn render_markdown(records: &[RunRecord]) -> String {
    let epochs = epoch_columns(records);
    type Key<'a> = (&'a str, usize, usize);
    let mut groups: Vec<(Key, Vec<&RunRecord>)> = Vec::new();
    for r in records {
        let key = (r.dataset.as_str(), r.n, r.m);
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, rows)) => rows.push(r),
            None => groups.push((key, vec![r])),
        }
    }

    let mut out = String::new();
    for ((dataset, n, m), rows) in groups {
        let best = rows.iter().filter(|r| r.is_ok()).map(|r| r.f1).fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(out, "### {dataset} ({n}F, {m}L)\n");
        let eps: String = (1..=epochs).map(|i| format!(" ep{i} |")).collect();
        let _ = writeln!(out, "| Encoding |{eps} test | F1-score |");
        let _ = writeln!(out, "|---|{}---|---|", "---|".repeat(epochs));
        for r in rows {
            let _ = write!(out, "| {} |", r.encoding_label());
            if let Some(err) = &r.error {
                let _ = writeln!(out, "{} error: {} |", " - |".repeat(epochs + 1), err.replace('|', "/"));
                continue;
            }
            for i in 0..epochs {
                match r.ep_accuracies.get(i) {
                    Some(v) => {
                        let _ = write!(out, " {v:.4} |");
                    }
                    None => out.push_str(" |"),
                }
            }
            let f1 = if r.f1 == best { format!("**{:.4}**", r.f1) } else { format!("{:.4}", r.f1) };
            let _ = writeln!(out, " {:.4} | {f1} |", r.test_accuracy);
        }
        out.push('\n');
    }
    out
}

pub fn render(records: &[RunRecord], format: OutputFormat) -> Result<String> {
    if records.is_empty() {
        return Err(Error::Output("no records to emit".into()));
    }
    match format {
        OutputFormat::Csv => render_csv(records),
        OutputFormat::Json => render_json(records),
        OutputFormat::Md => Ok(render_markdown(records)),
    }
}

pub fn emit_results(records: &[RunRecord], format: OutputFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = render(records, format)?;
    std::fs::write(path, text).map_err(|e| Error::Output(format!("{}: {e}", path.display())))
}
