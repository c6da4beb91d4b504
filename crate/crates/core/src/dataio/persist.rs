use std::path::Path;

use crate::linalg::Matrix;
use crate::scatter::{Dataset, LabelSet};
use crate::{Error, Result, Scalar};

/// Writes a dataset as CSV: header of feature names, one sample per row.
pub fn write_dataset_csv<T: Scalar>(path: impl AsRef<Path>, d: &Dataset<T>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(d.feature_names())?;
    for s in d.samples() {
        w.write_record(s.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric CSV with a header row, as written by
/// [`write_dataset_csv`].
pub fn read_dataset_csv(path: impl AsRef<Path>) -> Result<Dataset<f64>> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let names: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    let m = names.len();
    let mut data = Vec::new();
    let mut n = 0;
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != m {
            return Err(Error::Parse {
                row: line,
                column: String::new(),
                message: format!("expected {m} fields, found {}", rec.len()),
            });
        }
        for (field, name) in rec.iter().zip(&names) {
            data.push(field.parse::<f64>().map_err(|e| Error::Parse {
                row: line,
                column: name.clone(),
                message: format!("{field:?}: {e}"),
            })?);
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    Dataset::with_names(Matrix::from_col_major(m, n, data), names)
}

/// Writes labels as CSV with columns `class_id,class_name`.
pub fn write_labels_csv(path: impl AsRef<Path>, l: &LabelSet) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["class_id", "class_name"])?;
    for &c in l.labels() {
        w.write_record([c.to_string(), l.class_names()[c].clone()])?;
    }
    w.flush()?;
    Ok(())
}

/// Reads labels written by [`write_labels_csv`]. The class count is one
/// more than the largest id present.
pub fn read_labels_csv(path: impl AsRef<Path>) -> Result<LabelSet> {
    let mut r = csv::Reader::from_path(path)?;
    let mut ids = Vec::new();
    let mut names: Vec<Option<String>> = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let field = rec.get(0).unwrap_or_default();
        let id: usize = field.parse().map_err(|e| Error::Parse {
            row: line,
            column: "class_id".into(),
            message: format!("{field:?}: {e}"),
        })?;
        if names.len() <= id {
            names.resize(id + 1, None);
        }
        let name = rec.get(1).unwrap_or_default().to_owned();
        match &names[id] {
            Some(existing) if *existing != name => {
                return Err(Error::Parse {
                    row: line,
                    column: "class_name".into(),
                    message: format!("class {id} named both {existing:?} and {name:?}"),
                })
            }
            _ => names[id] = Some(name),
        }
        ids.push(id);
    }
    let names = names
        .into_iter()
        .enumerate()
        .map(|(i, n)| n.unwrap_or_else(|| i.to_string()))
        .collect();
    LabelSet::with_names(ids, names)
}
