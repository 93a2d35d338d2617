//! CSV curve files with a `#`-prefixed metadata header.
//!
//! ```text
//! # rbswipt curve file
//! # scenario: fig9
//! # config-digest: sha256:…
//! # units: mu=1; c_tilde=bit/s/Hz; status=text
//! # config:
//! # | preset = fig9
//! # | [geometry]
//! # | …
//! mu,c_tilde,status
//! 0,13.1,ok
//! ```
//!
//! Numbers are written in the shortest form that parses back to the same
//! `f64`. Missing values are empty cells, never NaN; a `status` column says
//! why.

use std::fmt::Write as _;

use thiserror::Error;

use crate::units::format_number;

const MAGIC: &str = "rbswipt curve file";
const CONFIG_PREFIX: &str = "# |";
/// Unit marker for non-numeric columns.
pub const TEXT_UNIT: &str = "text";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Column {
    pub name: String,
    pub unit: String,
}

impl Column {
    pub fn new(name: impl Into<String>, unit: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            unit: unit.into(),
        }
    }

    pub fn text(name: impl Into<String>) -> Self {
        Self::new(name, TEXT_UNIT)
    }

    pub fn is_text(&self) -> bool {
        self.unit == TEXT_UNIT
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn number(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn text(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Number)
    }
}

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("not a curve file (missing `# {MAGIC}` header)")]
    NotACurveFile,
    #[error("row {row} has {found} cells, expected {expected}")]
    Width { row: usize, found: usize, expected: usize },
    #[error("row {row}, column `{column}`: NaN cannot be written; leave the cell empty")]
    NaN { row: usize, column: String },
    #[error("row {row}, column `{column}`: `{text}` is not a number")]
    BadNumber { row: usize, column: String, text: String },
    #[error("malformed header line `{0}`")]
    Header(String),
    #[error("units line does not match the columns")]
    Units,
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveFile {
    pub scenario: String,
    pub config_digest: String,
    /// Further `key: value` header entries, in order.
    pub metadata: Vec<(String, String)>,
    /// Complete configuration text the data was computed from.
    pub config: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<Cell>>,
}

impl CurveFile {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// All cells of one column.
    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn to_csv_string(&self) -> Result<String, CurveError> {
        let mut out = String::new();
        let _ = writeln!(out, "# {MAGIC}");
        let _ = writeln!(out, "# scenario: {}", self.scenario);
        let _ = writeln!(out, "# config-digest: {}", self.config_digest);
        let units: Vec<String> = self.columns.iter().map(|c| format!("{}={}", c.name, c.unit)).collect();
        let _ = writeln!(out, "# units: {}", units.join("; "));
        for (k, v) in &self.metadata {
            let _ = writeln!(out, "# {k}: {v}");
        }
        let _ = writeln!(out, "# config:");
        for line in self.config.lines() {
            if line.is_empty() {
                let _ = writeln!(out, "{CONFIG_PREFIX}");
            } else {
                let _ = writeln!(out, "{CONFIG_PREFIX} {line}");
            }
        }

        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        writer.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for (r, row) in self.rows.iter().enumerate() {
            if row.len() != self.columns.len() {
                return Err(CurveError::Width {
                    row: r,
                    found: row.len(),
                    expected: self.columns.len(),
                });
            }
            let mut record = Vec::with_capacity(row.len());
            for (cell, col) in row.iter().zip(&self.columns) {
                record.push(match cell {
                    Cell::Number(v) if v.is_nan() => {
                        return Err(CurveError::NaN {
                            row: r,
                            column: col.name.clone(),
                        })
                    }
                    Cell::Number(v) => format_number(*v),
                    Cell::Text(s) => s.clone(),
                    Cell::Empty => String::new(),
                });
            }
            writer.write_record(&record)?;
        }
        let bytes = writer.into_inner().map_err(|e| CurveError::Csv(e.into_error().into()))?;
        out.push_str(&String::from_utf8(bytes).expect("csv output is UTF-8"));
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self, CurveError> {
        let mut lines = text.lines();
        if lines.next().map(str::trim) != Some(&format!("# {MAGIC}")) {
            return Err(CurveError::NotACurveFile);
        }
        let mut file = CurveFile::default();
        let mut units: Option<Vec<(String, String)>> = None;
        let mut config = Vec::new();
        for line in text.lines().skip(1).take_while(|l| l.starts_with('#')) {
            if let Some(rest) = line.strip_prefix(CONFIG_PREFIX) {
                config.push(rest.strip_prefix(' ').unwrap_or(rest));
                continue;
            }
            let body = line[1..].trim();
            if body == "config:" {
                continue;
            }
            let (key, value) = body
                .split_once(": ")
                .or_else(|| body.strip_suffix(':').map(|k| (k, "")))
                .ok_or_else(|| CurveError::Header(line.to_string()))?;
            match key {
                "scenario" => file.scenario = value.to_string(),
                "config-digest" => file.config_digest = value.to_string(),
                "units" => {
                    units = Some(
                        value
                            .split("; ")
                            .filter(|s| !s.is_empty())
                            .map(|pair| {
                                let (n, u) = pair.split_once('=').ok_or(CurveError::Units)?;
                                Ok((n.to_string(), u.to_string()))
                            })
                            .collect::<Result<_, CurveError>>()?,
                    )
                }
                _ => file.metadata.push((key.to_string(), value.to_string())),
            }
        }
        file.config = config.iter().map(|l| format!("{l}\n")).collect();

        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .has_headers(true)
            .from_reader(text.as_bytes());
        let headers = reader.headers()?.clone();
        let units = units.unwrap_or_default();
        if units.len() != headers.len() || units.iter().zip(headers.iter()).any(|((n, _), h)| n != h) {
            return Err(CurveError::Units);
        }
        file.columns = units.into_iter().map(|(n, u)| Column::new(n, u)).collect();
        for (r, record) in reader.records().enumerate() {
            let record = record?;
            let mut row = Vec::with_capacity(record.len());
            for (text, col) in record.iter().zip(&file.columns) {
                row.push(if text.is_empty() {
                    Cell::Empty
                } else if col.is_text() {
                    Cell::Text(text.to_string())
                } else {
                    Cell::Number(text.parse().map_err(|_| CurveError::BadNumber {
                        row: r,
                        column: col.name.clone(),
                        text: text.to_string(),
                    })?)
                });
            }
            file.rows.push(row);
        }
        Ok(file)
    }
}
