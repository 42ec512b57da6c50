//! Study-level effect tables.
//!
//! A table is a delimited file with a header row. Only the log effect and
//! its standard error are required; identification columns are optional.
//! Both the short header names used in published supplements (`LnEE`,
//! `SELnEE`, `ID`, `RowID`) and snake_case names are accepted, matched
//! case-insensitively. Unknown columns are ignored, so a table carrying
//! extra derived columns (Z, p-value, rank) parses as-is.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One study's log risk ratio and its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyRecord {
    /// 1-based position in the input table.
    pub row_id: usize,
    pub accession_id: String,
    pub author: String,
    pub year: i32,
    /// Natural log of the risk ratio.
    pub ln_effect: f64,
    /// Standard error of `ln_effect`; always finite and > 0.
    pub se_ln_effect: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Dataset {
    pub label: String,
    pub records: Vec<StudyRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    Tsv,
}

impl TableFormat {
    fn delimiter(self) -> u8 {
        match self {
            TableFormat::Csv => b',',
            TableFormat::Tsv => b'\t',
        }
    }

    /// Guess the format from a file name; anything not ending in `.tsv`
    /// or `.tab` is treated as CSV.
    pub fn from_path(path: &str) -> Self {
        let lower = path.to_ascii_lowercase();
        if lower.ends_with(".tsv") || lower.ends_with(".tab") {
            TableFormat::Tsv
        } else {
            TableFormat::Csv
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Column {
    RowId,
    AccessionId,
    Author,
    Year,
    LnEffect,
    SeLnEffect,
}

fn classify_header(name: &str) -> Option<Column> {
    let key = name
        .trim()
        .trim_start_matches('\u{feff}')
        .to_ascii_lowercase();
    match key.as_str() {
        "row_id" | "rowid" => Some(Column::RowId),
        "accession_id" | "id" => Some(Column::AccessionId),
        "author" => Some(Column::Author),
        "year" => Some(Column::Year),
        "ln_effect" | "lnee" => Some(Column::LnEffect),
        "se_ln_effect" | "selnee" => Some(Column::SeLnEffect),
        _ => None,
    }
}

#[derive(Default)]
struct ColumnMap {
    accession_id: Option<usize>,
    author: Option<usize>,
    year: Option<usize>,
    ln_effect: Option<usize>,
    se_ln_effect: Option<usize>,
}

impl ColumnMap {
    fn from_header(header: &csv::StringRecord) -> Result<Self> {
        let mut map = ColumnMap::default();
        for (idx, name) in header.iter().enumerate() {
            let slot = match classify_header(name) {
                // Row ids are reassigned from input order.
                Some(Column::RowId) | None => continue,
                Some(Column::AccessionId) => &mut map.accession_id,
                Some(Column::Author) => &mut map.author,
                Some(Column::Year) => &mut map.year,
                Some(Column::LnEffect) => &mut map.ln_effect,
                Some(Column::SeLnEffect) => &mut map.se_ln_effect,
            };
            slot.get_or_insert(idx);
        }
        if map.ln_effect.is_none() {
            return Err(Error::MissingColumn("ln_effect"));
        }
        if map.se_ln_effect.is_none() {
            return Err(Error::MissingColumn("se_ln_effect"));
        }
        Ok(map)
    }
}

/// Parses a plain decimal or scientific-notation number. Locale forms such
/// as `0,5` and non-finite spellings (`NaN`, `inf`) are rejected.
fn parse_real(field: &str, column: &str, row: usize) -> Result<f64> {
    let text = field.trim();
    let malformed = || Error::MalformedRow {
        row,
        reason: format!("{column} value {text:?} is not a finite number"),
    };
    if text.is_empty() || text.contains(',') {
        return Err(malformed());
    }
    let value: f64 = text.parse().map_err(|_| malformed())?;
    if !value.is_finite() {
        return Err(malformed());
    }
    Ok(value)
}

fn field(record: &csv::StringRecord, idx: Option<usize>) -> &str {
    idx.and_then(|i| record.get(i)).unwrap_or("").trim()
}

/// Parses a delimited study table into a [`Dataset`].
///
/// Records keep input order and get `row_id` 1..k. Missing optional columns
/// are filled with an empty string (ids, author) or 0 (year).
pub fn parse_study_table(raw_text: &str, format: TableFormat) -> Result<Dataset> {
    if raw_text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .has_headers(true)
        .flexible(true)
        .from_reader(raw_text.as_bytes());

    let header = reader.headers().map_err(|e| Error::MalformedRow {
        row: 0,
        reason: format!("unreadable header: {e}"),
    })?;
    let columns = ColumnMap::from_header(header)?;

    let mut records = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let row_no = i + 1;
        let row = row.map_err(|e| Error::MalformedRow {
            row: row_no,
            reason: e.to_string(),
        })?;
        let ln_effect = parse_real(field(&row, columns.ln_effect), "ln_effect", row_no)?;
        let se = parse_real(field(&row, columns.se_ln_effect), "se_ln_effect", row_no)?;
        if se <= 0.0 {
            return Err(Error::NonPositiveSe { row: row_no, se });
        }
        let year_text = field(&row, columns.year);
        let year = if year_text.is_empty() {
            0
        } else {
            year_text.parse().map_err(|_| Error::MalformedRow {
                row: row_no,
                reason: format!("year value {year_text:?} is not an integer"),
            })?
        };
        records.push(StudyRecord {
            row_id: row_no,
            accession_id: field(&row, columns.accession_id).to_string(),
            author: field(&row, columns.author).to_string(),
            year,
            ln_effect,
            se_ln_effect: se,
        });
    }

    if records.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(Dataset {
        label: String::new(),
        records,
    })
}

impl Dataset {
    pub fn new(label: impl Into<String>, records: Vec<StudyRecord>) -> Self {
        Dataset {
            label: label.into(),
            records,
        }
    }

    /// Builds a dataset from bare `(ln_effect, se)` pairs, numbering rows from 1.
    pub fn from_effects(pairs: &[(f64, f64)]) -> Result<Self> {
        let mut records = Vec::with_capacity(pairs.len());
        for (i, &(ln_effect, se)) in pairs.iter().enumerate() {
            let row = i + 1;
            if !ln_effect.is_finite() || !se.is_finite() {
                return Err(Error::MalformedRow {
                    row,
                    reason: "non-finite effect or standard error".into(),
                });
            }
            if se <= 0.0 {
                return Err(Error::NonPositiveSe { row, se });
            }
            records.push(StudyRecord {
                row_id: row,
                accession_id: String::new(),
                author: String::new(),
                year: 0,
                ln_effect,
                se_ln_effect: se,
            });
        }
        Ok(Dataset::new("", records))
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn standard_errors(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.se_ln_effect).collect()
    }

    /// Serializes back to CSV with snake_case headers. Parsing the output
    /// reproduces every field exactly.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        let io_ok = "writing to a Vec cannot fail";
        writer
            .write_record([
                "row_id",
                "accession_id",
                "author",
                "year",
                "ln_effect",
                "se_ln_effect",
            ])
            .expect(io_ok);
        for r in &self.records {
            writer
                .write_record([
                    r.row_id.to_string(),
                    r.accession_id.clone(),
                    r.author.clone(),
                    r.year.to_string(),
                    r.ln_effect.to_string(),
                    r.se_ln_effect.to_string(),
                ])
                .expect(io_ok);
        }
        String::from_utf8(writer.into_inner().expect(io_ok)).expect("csv output is UTF-8")
    }
}

/// |ln RR| above this is implausible for environmental epidemiology.
pub const LARGE_EFFECT_THRESHOLD: f64 = 1.0;
pub const LARGE_SE_THRESHOLD: f64 = 1.0;

/// Non-fatal findings from [`validate_dataset`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DatasetWarning {
    /// The same (author, year) appears on more than one row.
    DuplicateStudy {
        author: String,
        year: i32,
        row_ids: Vec<usize>,
    },
    LargeEffect {
        row_id: usize,
        ln_effect: f64,
    },
    LargeStandardError {
        row_id: usize,
        se_ln_effect: f64,
    },
}

impl fmt::Display for DatasetWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatasetWarning::DuplicateStudy {
                author,
                year,
                row_ids,
            } => write!(f, "duplicate study {author} {year} on rows {row_ids:?}"),
            DatasetWarning::LargeEffect { row_id, ln_effect } => write!(
                f,
                "row {row_id}: implausibly large effect, |ln_effect| = {} > {LARGE_EFFECT_THRESHOLD}",
                ln_effect.abs()
            ),
            DatasetWarning::LargeStandardError {
                row_id,
                se_ln_effect,
            } => write!(
                f,
                "row {row_id}: large standard error {se_ln_effect} > {LARGE_SE_THRESHOLD}"
            ),
        }
    }
}

/// Returns warnings for duplicate (author, year) pairs and implausible
/// magnitudes. Duplicates are reported once per pair, ordered by first row.
/// Rows without an author are never considered duplicates.
pub fn validate_dataset(d: &Dataset) -> Vec<DatasetWarning> {
    let mut groups: BTreeMap<(&str, i32), Vec<usize>> = BTreeMap::new();
    for r in d.records.iter().filter(|r| !r.author.is_empty()) {
        groups
            .entry((r.author.as_str(), r.year))
            .or_default()
            .push(r.row_id);
    }
    let mut duplicates: Vec<_> = groups
        .into_iter()
        .filter(|(_, rows)| rows.len() > 1)
        .map(|((author, year), row_ids)| DatasetWarning::DuplicateStudy {
            author: author.to_string(),
            year,
            row_ids,
        })
        .collect();
    duplicates.sort_by_key(|w| match w {
        DatasetWarning::DuplicateStudy { row_ids, .. } => row_ids[0],
        _ => unreachable!(),
    });

    let mut warnings = duplicates;
    for r in &d.records {
        if r.ln_effect.abs() > LARGE_EFFECT_THRESHOLD {
            warnings.push(DatasetWarning::LargeEffect {
                row_id: r.row_id,
                ln_effect: r.ln_effect,
            });
        }
        if r.se_ln_effect > LARGE_SE_THRESHOLD {
            warnings.push(DatasetWarning::LargeStandardError {
                row_id: r.row_id,
                se_ln_effect: r.se_ln_effect,
            });
        }
    }
    warnings
}
