use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("length mismatch: {what} has {found} entries, expected {expected}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("feature dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("class {class} has no samples")]
    EmptyClass { class: usize },
    #[error("label {label} out of range for {class_count} classes")]
    LabelOutOfRange { label: usize, class_count: usize },
    #[error("train labels have {train} classes but test labels have {test}")]
    ClassCountMismatch { train: usize, test: usize },
    #[error("a labeling needs at least two classes, got {0}")]
    TooFewClasses(usize),
    #[error("dataset must have at least one feature and one sample")]
    EmptyDataset,
    #[error("non-finite value at feature {feature}, sample {sample}")]
    NonFinite { feature: usize, sample: usize },
    #[error("{weights} privacy weights given for {tasks} privacy labelings")]
    WeightMismatch { weights: usize, tasks: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("every grid cell failed; first failure: {0}")]
    AllCellsFailed(String),
    #[error("CSV parse error at row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },
    #[error("unknown category {value:?} in column {column:?}")]
    UnknownCategory { column: String, value: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
