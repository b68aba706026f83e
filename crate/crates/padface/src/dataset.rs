//! Valence/arousal sample tables: CSV with an `id,pleasure,arousal` header.
//!
//! Values must already lie in [-1, 1]; nothing is rescaled. Rows keep file
//! order, which later breaks distance ties. A file holding only a header (or
//! nothing at all) loads as an empty dataset.

use padface_core::reference::{AnnotatedSample, ReferenceError};
use padface_core::{Dataset, PleasureArousal};

const COLUMNS: [&str; 3] = ["id", "pleasure", "arousal"];

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("line {line}, column {column}: {message}")]
    MalformedRow {
        line: u64,
        column: String,
        message: String,
    },
    #[error("missing column `{0}` in header")]
    MissingColumn(&'static str),
    #[error("{0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Reference(#[from] ReferenceError),
}

impl DatasetError {
    pub fn kind(&self) -> &'static str {
        match self {
            DatasetError::MalformedRow { .. } => "MalformedRow",
            DatasetError::MissingColumn(_) | DatasetError::Csv(_) => "MalformedDataset",
            DatasetError::Reference(e) => e.kind(),
        }
    }

    pub fn line(&self) -> Option<u64> {
        match self {
            DatasetError::MalformedRow { line, .. } => Some(*line),
            DatasetError::Csv(e) => e.position().map(|p| p.line()),
            _ => None,
        }
    }
}

pub fn load_dataset(source_label: &str, bytes: &[u8]) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(bytes);
    let headers = reader.headers()?.clone();
    if headers.is_empty() {
        return Ok(Dataset::new(source_label, Vec::new())?);
    }
    let mut index = [0usize; 3];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or(DatasetError::MissingColumn(name))?;
    }

    let mut samples = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let field = |i: usize| record.get(index[i]).unwrap_or("");
        let bad = |column: &str, message: String| DatasetError::MalformedRow {
            line,
            column: column.to_string(),
            message,
        };
        let id = field(0);
        if id.is_empty() {
            return Err(bad("id", "empty id".to_string()));
        }
        let mut pa = [0.0; 2];
        for (slot, col) in pa.iter_mut().zip([1, 2]) {
            let text = field(col);
            let value: f64 = text
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| bad(COLUMNS[col], format!("`{text}` is not a number")))?;
            if !(-1.0..=1.0).contains(&value) {
                return Err(bad(COLUMNS[col], format!("{value} is outside [-1, 1]")));
            }
            *slot = value;
        }
        samples.push(AnnotatedSample {
            id: id.to_string(),
            pa: PleasureArousal::new(pa[0], pa[1]).expect("range checked above"),
        });
    }
    Ok(Dataset::new(source_label, samples)?)
}
