//! On-disk layout of a preprocessed dataset: a feature CSV plus one label
//! file per label column, `<stem>.<label>.labels.csv`, in the same directory.

use std::path::{Path, PathBuf};

use privproj::dataio::{read_dataset_csv, read_labels_csv, write_dataset_csv, write_labels_csv, LoadedData};
use privproj::experiment::TaskData;
use privproj::{Dataset, LabelSet, Result};
use sha2::{Digest, Sha256};

const LABEL_SUFFIX: &str = ".labels.csv";

fn stem(data: &Path) -> String {
    data.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn label_path(data: &Path, label: &str) -> PathBuf {
    data.with_file_name(format!("{}.{label}{LABEL_SUFFIX}", stem(data)))
}

/// Label files belonging to `data`, as `(label name, path)` sorted by name.
pub fn label_files(data: &Path) -> std::io::Result<Vec<(String, PathBuf)>> {
    let dir = match data.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let prefix = format!("{}.", stem(data));
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if let Some(label) = name.strip_prefix(&prefix).and_then(|r| r.strip_suffix(LABEL_SUFFIX)) {
            out.push((label.to_owned(), entry.path()));
        }
    }
    out.sort();
    Ok(out)
}

pub fn write_loaded(data: &Path, loaded: &LoadedData) -> Result<()> {
    write_dataset_csv(data, &loaded.dataset)?;
    for (name, labels) in &loaded.labels {
        write_labels_csv(label_path(data, name), labels)?;
    }
    Ok(())
}

pub fn read_labels(data: &Path, label: &str) -> Result<LabelSet> {
    read_labels_csv(label_path(data, label))
}

pub fn read_task(data: &Path, utility: &str, privacy: &[String]) -> Result<TaskData<f64>> {
    let dataset: Dataset = read_dataset_csv(data)?;
    let privacy = privacy.iter().map(|p| read_labels(data, p)).collect::<Result<_>>()?;
    TaskData::new(dataset, read_labels(data, utility)?, privacy)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
