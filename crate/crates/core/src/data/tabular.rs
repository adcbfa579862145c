use std::fs::File;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{LabeledDataset, Sample};
use crate::error::{Error, Result};

/// Which column holds the class label: a header name or a 0-based index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LabelColumn {
    Index(usize),
    Name(String),
}

impl FromStr for LabelColumn {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Config("empty label column".into()));
        }
        Ok(s.parse::<usize>().map_or_else(|_| LabelColumn::Name(s.to_string()), LabelColumn::Index))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvOptions {
    pub label_column: LabelColumn,
    /// Label token mapped to class 1. The one other token seen maps to class 0.
    pub positive_label: String,
    /// `None` detects a header: a first row with any non-numeric feature cell.
    #[serde(default)]
    pub has_header: Option<bool>,
}

pub fn load_csv(path: impl AsRef<Path>, options: &CsvOptions) -> Result<LabeledDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))?;
    let name = path.file_stem().map_or_else(|| "csv".to_string(), |s| s.to_string_lossy().into_owned());
    read_csv(file, name, options)
}

/// Parses comma-separated samples from `reader`, keeping row order.
pub fn read_csv<R: Read>(reader: R, name: impl Into<String>, options: &CsvOptions) -> Result<LabeledDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).flexible(true).trim(csv::Trim::All).from_reader(reader);
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Input(format!("line {}: {e}", i + 1)))?;
        if rec.iter().all(str::is_empty) {
            continue;
        }
        rows.push(rec);
    }
    let Some(first) = rows.first() else {
        return Err(Error::Input("empty file".into()));
    };
    let width = first.len();

    let has_header = match (options.has_header, &options.label_column) {
        (Some(h), _) => h,
        (None, LabelColumn::Name(_)) => true,
        (None, LabelColumn::Index(label)) => first
            .iter()
            .enumerate()
            .any(|(c, cell)| c != *label && cell.parse::<f64>().is_err()),
    };
    let label_idx = match &options.label_column {
        LabelColumn::Index(i) => *i,
        LabelColumn::Name(n) => {
            if !has_header {
                return Err(Error::Config(format!("label column '{n}' given by name but the file has no header")));
            }
            first
                .iter()
                .position(|h| h == n)
                .ok_or_else(|| Error::Config(format!("no column named '{n}' in header")))?
        }
    };
    if label_idx >= width {
        return Err(Error::Config(format!("label column {label_idx} out of range for {width} columns")));
    }
    if width < 2 {
        return Err(Error::Input("need at least one feature column besides the label".into()));
    }

    let body = if has_header { &rows[1..] } else { &rows[..] };
    if body.is_empty() {
        return Err(Error::Input("no samples".into()));
    }
    let line_offset = if has_header { 2 } else { 1 };
    let mut negative: Option<String> = None;
    let mut samples = Vec::with_capacity(body.len());
    for (r, rec) in body.iter().enumerate() {
        let line = r + line_offset;
        if rec.len() != width {
            return Err(Error::Input(format!("line {line}: expected {width} columns, found {}", rec.len())));
        }
        let token = &rec[label_idx];
        let label = if token == options.positive_label {
            1
        } else {
            match &negative {
                None => {
                    negative = Some(token.to_string());
                    0
                }
                Some(neg) if neg == token => 0,
                Some(neg) => {
                    return Err(Error::Input(format!(
                        "line {line}, column {}: unknown label '{token}' (positive '{}', negative '{neg}')",
                        label_idx + 1,
                        options.positive_label
                    )))
                }
            }
        };
        let mut features = Vec::with_capacity(width - 1);
        for (c, cell) in rec.iter().enumerate() {
            if c == label_idx {
                continue;
            }
            let v: f64 = cell
                .parse()
                .map_err(|_| Error::Input(format!("line {line}, column {}: cannot parse '{cell}' as a number", c + 1)))?;
            features.push(v);
        }
        samples.push(Sample { features, label });
    }
    LabeledDataset::new(name, width - 1, samples)
}
