use sha2::{Digest, Sha256};
use std::path::Path;

use super::IoError;
use crate::sample::Sample;

/// Column selector for delimited input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Column {
    /// Header name; the first record is the header.
    Name(String),
    /// Zero-based field index; a non-numeric first record is treated as a header.
    Index(usize),
}

impl std::str::FromStr for Column {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => Column::Index(i),
            Err(_) => Column::Name(s.to_string()),
        })
    }
}

/// An ingested sample with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub sample: Sample,
    /// Number of values read from the file.
    pub count: usize,
    /// SHA-256 of the sorted sample, see [`digest_values`].
    pub digest: String,
}

/// Hex SHA-256 over the little-endian bytes of `values`.
pub fn digest_values(values: &[f64]) -> String {
    let mut h = Sha256::new();
    for v in values {
        h.update(v.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn parse_real(field: &str, line: usize) -> Result<f64, IoError> {
    field.trim().parse::<f64>().map_err(|_| IoError::Parse {
        line,
        message: format!("`{}` is not a number", field.trim()),
    })
}

fn sniff_delimiter(text: &str) -> u8 {
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .unwrap_or("");
    b",\t;"
        .iter()
        .copied()
        .find(|&d| first.as_bytes().contains(&d))
        .unwrap_or(b',')
}

/// Parses one value per line, or the selected column of delimited text.
///
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_values(text: &str, column: Option<&Column>) -> Result<Vec<f64>, IoError> {
    let Some(column) = column else {
        let mut out = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            out.push(parse_real(t, i + 1)?);
        }
        return Ok(out);
    };

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .delimiter(sniff_delimiter(text))
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    let mut index = None;
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| IoError::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let idx = match (index, column) {
            (Some(idx), _) => idx,
            (None, Column::Name(name)) => {
                let idx = rec
                    .iter()
                    .position(|f| f == name)
                    .ok_or_else(|| IoError::UnknownColumn(name.clone()))?;
                index = Some(idx);
                continue;
            }
            (None, Column::Index(idx)) => {
                index = Some(*idx);
                let first = rec.get(*idx).ok_or_else(|| IoError::Parse {
                    line,
                    message: format!("no field {idx}"),
                })?;
                if first.parse::<f64>().is_err() {
                    continue;
                }
                *idx
            }
        };
        let field = rec.get(idx).ok_or_else(|| IoError::Parse {
            line,
            message: format!("no field {idx}"),
        })?;
        out.push(parse_real(field, line)?);
    }
    Ok(out)
}

/// Reads `path`, parses it and validates the values into a [`Sample`].
pub fn ingest(path: impl AsRef<Path>, column: Option<&Column>, take_abs: bool) -> Result<Ingested, IoError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => IoError::FileNotFound(path.display().to_string()),
        _ => IoError::Io(e),
    })?;
    let values = parse_values(&text, column)?;
    if values.is_empty() {
        return Err(IoError::EmptyInput);
    }
    let sample = Sample::new(&values, take_abs)?;
    Ok(Ingested {
        count: values.len(),
        digest: digest_values(sample.values()),
        sample,
    })
}
