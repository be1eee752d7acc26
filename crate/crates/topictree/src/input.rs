//! Delimited input files: one record per row with id, label and text
//! columns (names configurable). Comma and tab delimiters are supported;
//! when unspecified, `.tsv`/`.tab` extensions select tabs. Bytes that are
//! not valid UTF-8 are replaced with the Unicode replacement character, so
//! one bad record cannot abort ingestion.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawRecord {
    pub id: String,
    pub label: String,
    pub text: String,
}

/// Header names of the three required columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub id: String,
    pub label: String,
    pub text: String,
}

impl Default for ColumnSpec {
    fn default() -> Self {
        ColumnSpec {
            id: "id".to_string(),
            label: "label".to_string(),
            text: "text".to_string(),
        }
    }
}

fn infer_delimiter(path: &Path) -> u8 {
    match path.extension().and_then(|e| e.to_str()) {
        Some("tsv") | Some("tab") => b'\t',
        _ => b',',
    }
}

/// Reads all records from a delimited file with a header row.
pub fn read_records(
    path: &Path,
    delimiter: Option<u8>,
    columns: &ColumnSpec,
) -> Result<Vec<RawRecord>> {
    let delimiter = delimiter.unwrap_or_else(|| infer_delimiter(path));
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .flexible(true)
        .from_path(path)?;

    let headers = reader.byte_headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| String::from_utf8_lossy(h) == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let id_idx = find(&columns.id)?;
    let label_idx = find(&columns.label)?;
    let text_idx = find(&columns.text)?;

    let mut records = Vec::new();
    for row in reader.byte_records() {
        let row = row?;
        let field = |idx: usize| -> String {
            row.get(idx)
                .map(|b| String::from_utf8_lossy(b).into_owned())
                .unwrap_or_default()
        };
        records.push(RawRecord {
            id: field(id_idx),
            label: field(label_idx),
            text: field(text_idx),
        });
    }
    Ok(records)
}

/// Writes records as CSV with an `id,label,text` header.
pub fn write_records(path: &Path, records: &[RawRecord]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["id", "label", "text"])?;
    for rec in records {
        writer.write_record([&rec.id, &rec.label, &rec.text])?;
    }
    writer.flush()?;
    Ok(())
}
