//! CSV ingestion with binary categorical encoding, class balancing,
//! subsampling and the Census/HAR preparation recipes.

mod load;
mod persist;
mod sampling;
mod schema;

pub use load::{binary_encode, encoded_width, load_csv, load_csv_from_reader, recode_census_marital, LoadedData};
pub use persist::{read_dataset_csv, read_labels_csv, write_dataset_csv, write_labels_csv};
pub use sampling::{
    balance_classes, balance_loaded, balanced_indices, stratified_holdout, subsample, subsample_indices,
    BalanceMode, SplitSpec,
};
pub use schema::{ColumnKind, ColumnSchema, ColumnSpec, MissingPolicy, Recode};
