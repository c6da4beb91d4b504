use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::linalg::Matrix;
use crate::scatter::{Dataset, LabelSet};
use crate::{Error, Result};

use super::schema::{ColumnKind, ColumnSchema, ColumnSpec, Recode};

/// A cleaned, encoded dataset and its label columns.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedData {
    pub dataset: Dataset<f64>,
    pub labels: BTreeMap<String, LabelSet>,
    /// Data rows read from the file.
    pub rows_read: usize,
    /// Rows removed for having a missing value.
    pub rows_dropped: usize,
}

impl LoadedData {
    pub fn label(&self, name: &str) -> Result<&LabelSet> {
        self.labels
            .get(name)
            .ok_or_else(|| Error::InvalidConfig(format!("no label column named {name:?}")))
    }

    /// Keeps the listed rows in every component.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        Ok(Self {
            dataset: self.dataset.select(idx)?,
            labels: self
                .labels
                .iter()
                .map(|(k, v)| Ok((k.clone(), v.select(idx)?)))
                .collect::<Result<_>>()?,
            rows_read: self.rows_read,
            rows_dropped: self.rows_dropped,
        })
    }
}

/// Number of bits used to binary-encode a column with `n` categories.
pub fn encoded_width(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Bits of `index` in `width` features, most significant bit first.
pub fn binary_encode(index: usize, width: usize) -> Vec<f64> {
    (0..width)
        .rev()
        .map(|b| if (index >> b) & 1 == 1 { 1.0 } else { 0.0 })
        .collect()
}

/// Groups an Adult marital-status value into `Married`,
/// `Used to be Married` or `Never Married`.
pub fn recode_census_marital(raw: &str) -> Result<&'static str> {
    match raw.trim() {
        "Married-civ-spouse" | "Married-spouse-absent" | "Married-AF-spouse" => Ok("Married"),
        "Divorced" | "Separated" | "Widowed" => Ok("Used to be Married"),
        "Never-married" => Ok("Never Married"),
        other => Err(Error::UnknownCategory {
            column: "marital-status".into(),
            value: other.to_owned(),
        }),
    }
}

pub fn load_csv(path: impl AsRef<Path>, schema: &ColumnSchema) -> Result<LoadedData> {
    load_csv_from_reader(std::fs::File::open(path)?, schema)
}

enum Cell {
    Number(f64),
    Category(usize),
    Label(String),
}

fn rewrite(spec: &ColumnSpec, raw: &str) -> Result<String> {
    let v = spec.value_map.get(raw).map_or(raw, String::as_str);
    match spec.recode {
        Some(Recode::CensusMarital) => recode_census_marital(v)
            .map(str::to_owned)
            .map_err(|_| Error::UnknownCategory {
                column: spec.name.clone(),
                value: v.to_owned(),
            }),
        None => Ok(v.to_owned()),
    }
}

/// Reads RFC-4180 CSV, drops rows with missing values, binary-encodes
/// categorical columns and collects label columns.
pub fn load_csv_from_reader<R: Read>(reader: R, schema: &ColumnSchema) -> Result<LoadedData> {
    schema.validate()?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(schema.has_header)
        .comment(schema.comment.map(|c| c as u8))
        .trim(if schema.trim { csv::Trim::All } else { csv::Trim::None })
        .flexible(true)
        .from_reader(reader);

    let positions: Vec<Option<usize>> = if schema.has_header {
        let header = rdr.headers()?.clone();
        schema
            .columns
            .iter()
            .map(|c| {
                header
                    .iter()
                    .position(|h| h == c.name)
                    .map(Some)
                    .ok_or_else(|| Error::Parse {
                        row: 1,
                        column: c.name.clone(),
                        message: "column missing from header".into(),
                    })
            })
            .collect::<Result<_>>()?
    } else {
        (0..schema.columns.len()).map(Some).collect()
    };

    let used: Vec<(usize, &ColumnSpec)> = schema
        .columns
        .iter()
        .zip(&positions)
        .filter(|(c, _)| c.kind != ColumnKind::Drop)
        .map(|(c, p)| (p.expect("resolved"), c))
        .collect();

    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut rows_read = 0;
    let mut rows_dropped = 0;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows_read += 1;
        if !schema.has_header && record.len() != schema.columns.len() {
            return Err(Error::Parse {
                row: line,
                column: String::new(),
                message: format!(
                    "expected {} fields, found {}",
                    schema.columns.len(),
                    record.len()
                ),
            });
        }
        let mut cells = Vec::with_capacity(used.len());
        let mut missing = false;
        for &(pos, spec) in &used {
            let raw = record.get(pos).ok_or_else(|| Error::Parse {
                row: line,
                column: spec.name.clone(),
                message: "field missing".into(),
            })?;
            if schema.missing_values.iter().any(|m| m == raw) {
                missing = true;
                break;
            }
            let value = rewrite(spec, raw)?;
            let cell = match spec.kind {
                ColumnKind::Numeric => {
                    let x: f64 = value.parse().map_err(|e| Error::Parse {
                        row: line,
                        column: spec.name.clone(),
                        message: format!("{value:?}: {e}"),
                    })?;
                    if !x.is_finite() {
                        return Err(Error::Parse {
                            row: line,
                            column: spec.name.clone(),
                            message: format!("non-finite value {value:?}"),
                        });
                    }
                    Cell::Number(x)
                }
                ColumnKind::Categorical => {
                    let cats = spec.categories.as_deref().unwrap_or_default();
                    let idx = cats.iter().position(|c| *c == value).ok_or_else(|| {
                        Error::UnknownCategory {
                            column: spec.name.clone(),
                            value: value.clone(),
                        }
                    })?;
                    Cell::Category(idx)
                }
                ColumnKind::Label => {
                    if let Some(cats) = &spec.categories {
                        if !cats.contains(&value) {
                            return Err(Error::UnknownCategory {
                                column: spec.name.clone(),
                                value,
                            });
                        }
                    }
                    Cell::Label(value)
                }
                ColumnKind::Drop => unreachable!("drop columns are filtered out"),
            };
            cells.push(cell);
        }
        if missing {
            rows_dropped += 1;
        } else {
            rows.push(cells);
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyDataset);
    }

    let mut feature_names = Vec::new();
    for (_, spec) in &used {
        match spec.kind {
            ColumnKind::Numeric => feature_names.push(spec.name.clone()),
            ColumnKind::Categorical => {
                let n = spec.categories.as_ref().map_or(0, Vec::len);
                let w = encoded_width(n);
                feature_names.extend((0..w).map(|b| format!("{}_b{}", spec.name, w - 1 - b)));
            }
            _ => {}
        }
    }
    let m = feature_names.len();
    let mut data = Vec::with_capacity(m * rows.len());
    let mut label_values: Vec<Vec<String>> = vec![Vec::new(); used.len()];
    for row in &rows {
        for (col, (cell, (_, spec))) in row.iter().zip(&used).enumerate() {
            match cell {
                Cell::Number(x) => data.push(*x),
                Cell::Category(idx) => {
                    let n = spec.categories.as_ref().map_or(0, Vec::len);
                    data.extend(binary_encode(*idx, encoded_width(n)));
                }
                Cell::Label(v) => label_values[col].push(v.clone()),
            }
        }
    }
    let dataset = Dataset::with_names(Matrix::from_col_major(m, rows.len(), data), feature_names)?;

    let mut labels = BTreeMap::new();
    for (col, (_, spec)) in used.iter().enumerate() {
        if spec.kind != ColumnKind::Label {
            continue;
        }
        let values = &label_values[col];
        let set = match &spec.categories {
            Some(cats) => LabelSet::with_names(
                values
                    .iter()
                    .map(|v| cats.iter().position(|c| c == v).expect("checked"))
                    .collect(),
                cats.clone(),
            )?,
            None => LabelSet::from_values(values)?,
        };
        labels.insert(spec.name.clone(), set);
    }

    Ok(LoadedData {
        dataset,
        labels,
        rows_read,
        rows_dropped,
    })
}
